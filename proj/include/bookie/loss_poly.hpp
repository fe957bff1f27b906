#pragma once

// Loss polynomials: the denominator D_{H,K}, numerator N_{H,K}, the
// opportunistic polynomial Q_{H,s}, the optimal-loss polynomial P_{T,K}, and
// the Hermite regret factors.

#include "bookie/combinatorics.hpp"
#include "bookie/errors.hpp"
#include "bookie/polynomial.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bookie {

inline constexpr double kDefaultRootTol = 1e-10;

// Airy constant 6^(-1/3) i_1 = 2^(-1/3) |a_1|, a_1 the first zero of Ai.
inline constexpr double kAiryConstant = 1.8557570814892385;

namespace detail {

// rising(-H, j) for j = 0..K, i.e. (-1)^j falling(H, j).
template <class R>
std::vector<R> rising_neg_table(int H, int K) {
  std::vector<R> w(K + 1, R(1));
  for (int j = 1; j <= K; ++j) w[j] = w[j - 1] * (R(j - 1) - R(H));
  return w;
}

// sum_m rising(-H, K-m) sigma[m] over m = 0..K.
template <class R>
R denom_from_esp(const std::vector<R>& w, std::span<const R> sigma, int K) {
  R acc(0);
  for (int m = 0; m <= K; ++m) acc += w[K - m] * sigma[m];
  return acc;
}

}  // namespace detail

/// D_{H,K}(v) = sum_m rising(-H, K-m) sigma_m(v), K = len(v).
template <class R>
R denom_eval(int H, std::span<const R> v) {
  const int K = static_cast<int>(v.size());
  const std::vector<R> sigma = esp_all(v);
  return detail::denom_from_esp(detail::rising_neg_table<R>(H, K), std::span<const R>(sigma), K);
}

template <class R>
R denom_eval(int H, const std::vector<R>& v) {
  return denom_eval(H, std::span<const R>(v));
}

/// N_{H,K}(v) = H D_{H-1,K}(v).
template <class R>
R num_eval(int H, std::span<const R> v) {
  if (H < 1) throw InvalidArgument("numerator needs H >= 1");
  return R(H) * denom_eval(H - 1, v);
}

template <class R>
R num_eval(int H, const std::vector<R>& v) {
  return num_eval(H, std::span<const R>(v));
}

/// Sign of D_{H,K}(v) through the precision ladder, with the relative
/// residual D / sum_m |rising(-H,K-m)| sigma_m(|v|).
struct DenomEvaluation {
  int sign = 0;
  bool certain = false;
  double relative = 0.0;
};
DenomEvaluation denom_eval_certified(int H, std::span<const double> v);

/// Coefficients c_{H,m}(s) of Q_{H,s}(x) = D_{H,K}(x 1 - s): the coefficient
/// of x^(K-m) is (-1)^m sum_n falling(H, m-n) C(K-n, m-n) sigma_n(s).
template <class R>
Polynomial<R> biased_coeffs(int H, std::span<const R> s) {
  const int K = static_cast<int>(s.size());
  if (K < 1) throw InvalidArgument("state must have at least one outcome");
  const std::vector<R> sigma = esp_all(s);
  std::vector<R> fall(K + 1, R(1));
  for (int j = 1; j <= K; ++j) fall[j] = fall[j - 1] * (R(H) - R(j - 1));
  std::vector<R> asc(K + 1, R(0));
  for (int m = 0; m <= K; ++m) {
    R acc(0);
    for (int n = 0; n <= m; ++n) acc += fall[m - n] * big_to<R>(binomial(K - n, m - n)) * sigma[n];
    asc[K - m] = m % 2 == 0 ? acc : R(-acc);
  }
  return Polynomial<R>(std::move(asc));
}

template <class R>
Polynomial<R> biased_coeffs(int H, const std::vector<R>& s) {
  return biased_coeffs(H, std::span<const R>(s));
}

/// P_{T,K}: coefficient of x^m is C(K,m) rising(-T, K-m).
template <class R>
Polynomial<R> opt_poly_coeffs(int T, int K) {
  if (T < 1 || K < 1) throw InvalidArgument("T and K must be positive");
  const std::vector<R> w = detail::rising_neg_table<R>(T, K);
  std::vector<R> asc(K + 1);
  for (int m = 0; m <= K; ++m) asc[m] = big_to<R>(binomial(K, m)) * w[K - m];
  return Polynomial<R>(std::move(asc));
}

/// Q_{H,s}(x) evaluated as D_{H,K}(x 1 - s), with derivatives from the ESPs.
/// Avoids expanded coefficients, which overflow and cancel for large H.
class OpportunisticTarget final : public RootTarget {
 public:
  OpportunisticTarget(int H, std::vector<double> s);
  int degree() const override { return static_cast<int>(s_.size()); }
  PointEvaluation evaluate(double x, double rel_accuracy) const override;

 private:
  int H_;
  std::vector<double> s_;
};

/// [max(s) + H, max(s) + H K]: the lower end from v >= H 1 on achievable
/// vectors, the upper from the uniform bookmaker's loss.
RootBracket loss_root_bracket(int H, std::span<const double> s);

/// Sub-bracket of width <= tol around the largest root of Q_{H,s}.
RootBracket opportunistic_loss_bracket(int H, std::span<const double> s, double tol);

/// L*_H(s): the largest real root of Q_{H,s}.
double opportunistic_loss(int H, std::span<const double> s, double tol = kDefaultRootTol);

/// L*_{T,K}, with closed forms for K <= 3.
double optimal_loss(int T, int K, double tol = kDefaultRootTol);

/// Trigonometric Cardano form for K = 3: T + 2 sqrt(T) cos(arccos(T^(-1/2)) / 3).
double optimal_loss_cardano(int T);

/// L*_{T,K} - T.
double regret(int T, int K);

/// Probabilist's Hermite polynomial He_K.
PolyCoeffs hermite_coeffs(int K);

/// beta_K, the largest root of He_K.
double regret_factor_asymptotic(int K);

/// (A_K, B_K) with A_K <= beta_K <= B_K.
std::pair<double, double> regret_factor_bounds(int K);

/// P_{T,K}(T + sqrt(T) y) / T^(K/2) as a polynomial in y. Its coefficients
/// are sums of nonnegative powers of T^(-1/2), so it stays well conditioned
/// for large T and tends to He_K as T grows.
PolyCoeffs rescaled_regret_coeffs(int T, int K);

/// R_{T,K} / sqrt(T), as the largest root of rescaled_regret_coeffs.
double regret_factor_finite(int T, int K);

}  // namespace bookie
