#include "bookie/loss_poly.hpp"

#include "bookie/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace bookie {

namespace {

void require_finite(std::span<const double> s) {
  for (double x : s) {
    if (!std::isfinite(x)) throw InvalidArgument("state entries must be finite");
  }
}

template <class R>
int sign_of(const R& x) {
  return x > R(0) ? 1 : (x < R(0) ? -1 : 0);
}

}  // namespace

DenomEvaluation denom_eval_certified(int H, std::span<const double> v) {
  const int K = static_cast<int>(v.size());
  auto attempt = [&]<class R>(bool last) -> std::optional<DenomEvaluation> {
    using std::abs;
    std::vector<R> vr(K), av(K);
    for (int k = 0; k < K; ++k) {
      vr[k] = R(v[k]);
      av[k] = abs(vr[k]);
    }
    const std::vector<R> sigma = esp_all(vr);
    const std::vector<R> asig = esp_all(av);
    const std::vector<R> w = detail::rising_neg_table<R>(H, K);
    R value(0), scale(0);
    for (int m = 0; m <= K; ++m) {
      value += w[K - m] * sigma[m];
      scale += abs(w[K - m]) * asig[m];
    }
    const R err = scale * R((6 * K + 10) * unit_roundoff<R>());
    const bool certain = err < abs(value);
    if (!certain && !last) return std::nullopt;
    DenomEvaluation e;
    e.certain = certain;
    e.sign = certain ? sign_of(value) : 0;
    e.relative = scale > R(0) ? to_double(R(value / scale)) : 0.0;
    return e;
  };
  return detail::with_adaptive_precision(attempt);
}

OpportunisticTarget::OpportunisticTarget(int H, std::vector<double> s) : H_(H), s_(std::move(s)) {
  if (H_ < 0) throw InvalidArgument("horizon must be nonnegative");
  require_finite(s_);
}

PointEvaluation OpportunisticTarget::evaluate(double x, double rel_accuracy) const {
  const int K = degree();
  auto attempt = [&]<class R>(bool last) -> std::optional<PointEvaluation> {
    using std::abs;
    std::vector<R> v(K), av(K);
    const R xr(x);
    for (int k = 0; k < K; ++k) {
      v[k] = xr - R(s_[k]);
      av[k] = abs(v[k]);
    }
    const std::vector<R> sigma = esp_all(v);
    const std::vector<R> asig = esp_all(av);
    const std::vector<R> w = detail::rising_neg_table<R>(H_, K);
    R f(0), d1(0), d2(0), scale(0);
    for (int m = 0; m <= K; ++m) {
      f += w[K - m] * sigma[m];
      scale += abs(w[K - m]) * asig[m];
      if (m <= K - 1) d1 += R(K - m) * w[K - 1 - m] * sigma[m];
      if (m <= K - 2) d2 += R((K - m) * (K - m - 1)) * w[K - 2 - m] * sigma[m];
    }
    const R err = scale * R((6 * K + 10) * unit_roundoff<R>());
    const R mag = abs(f);
    const bool good = rel_accuracy > 0.0 ? err <= mag * R(rel_accuracy) : err < mag;
    if (!good && !last) return std::nullopt;
    PointEvaluation e;
    e.certain = err < mag;
    e.sign = e.certain ? sign_of(f) : 0;
    if (f != R(0)) {
      e.g = to_double(R(d1 / f));
      e.h = to_double(R(d2 / f));
    }
    return e;
  };
  return detail::with_adaptive_precision(attempt);
}

RootBracket loss_root_bracket(int H, std::span<const double> s) {
  if (H < 1) throw InvalidArgument("horizon must be at least 1");
  if (s.empty()) throw InvalidArgument("state must have at least one outcome");
  require_finite(s);
  const double top = *std::max_element(s.begin(), s.end());
  const double K = static_cast<double>(s.size());
  return {top + H, top + H * K};
}

RootBracket opportunistic_loss_bracket(int H, std::span<const double> s, double tol) {
  const RootBracket b = loss_root_bracket(H, s);
  if (s.size() == 1) return {b.lo, b.lo};
  OpportunisticTarget target(H, std::vector<double>(s.begin(), s.end()));
  return isolate_largest_root(target, b, tol);
}

double opportunistic_loss(int H, std::span<const double> s, double tol) {
  const RootBracket b = opportunistic_loss_bracket(H, s, tol);
  return 0.5 * (b.lo + b.hi);
}

double optimal_loss_cardano(int T) {
  if (T < 1) throw InvalidArgument("T must be positive");
  const double t = T;
  const double rt = std::sqrt(t);
  return t + 2.0 * rt * std::cos(std::acos(1.0 / rt) / 3.0);
}

double optimal_loss(int T, int K, double tol) {
  if (T < 1 || K < 1) throw InvalidArgument("T and K must be positive");
  switch (K) {
    case 1:
      return T;
    case 2:
      return T + std::sqrt(static_cast<double>(T));
    case 3:
      return optimal_loss_cardano(T);
    default: {
      const std::vector<double> zero(K, 0.0);
      return opportunistic_loss(T, zero, tol);
    }
  }
}

double regret(int T, int K) {
  if (K == 3) {
    // Skip the T + ... - T round trip.
    const double rt = std::sqrt(static_cast<double>(T));
    return 2.0 * rt * std::cos(std::acos(1.0 / rt) / 3.0);
  }
  if (K == 2) return std::sqrt(static_cast<double>(T));
  return optimal_loss(T, K) - T;
}

PolyCoeffs hermite_coeffs(int K) {
  if (K < 1) throw InvalidArgument("K must be positive");
  std::vector<double> asc(K + 1, 0.0);
  BigInt kfact(1);
  for (int i = 2; i <= K; ++i) kfact *= i;
  for (int n = 0; 2 * n <= K; ++n) {
    BigInt den(1);
    for (int i = 2; i <= n; ++i) den *= i;
    for (int i = 2; i <= K - 2 * n; ++i) den *= i;
    den <<= n;
    BigInt c = kfact / den;
    if (n % 2 == 1) c = -c;
    asc[K - 2 * n] = c.convert_to<double>();
  }
  return PolyCoeffs(std::move(asc));
}

std::pair<double, double> regret_factor_bounds(int K) {
  if (K < 1) throw InvalidArgument("K must be positive");
  const double k = K;
  const double a = 2.0 * std::sqrt(k) - 9.0 * std::pow(2.0, -5.0 / 3.0) * std::pow(k, -1.0 / 6.0);
  const double b = std::sqrt(4.0 * k + 2.0) -
                   std::numbers::sqrt2 * kAiryConstant * std::pow(2.0 * k + 1.0, -1.0 / 6.0);
  return {a, b};
}

double regret_factor_asymptotic(int K) {
  if (K < 1) throw InvalidArgument("K must be positive");
  if (K == 1) return 0.0;
  // Newton from the upper bound; He_K is convex above its largest root, so
  // the iterates decrease monotonically.
  long double x = regret_factor_bounds(K).second;
  for (int iter = 0; iter < 200; ++iter) {
    long double prev = 1.0L, cur = x;  // He_0, He_1
    for (int n = 1; n < K; ++n) {
      const long double next = x * cur - n * prev;
      prev = cur;
      cur = next;
    }
    const long double step = cur / (K * prev);  // He_K' = K He_{K-1}
    x -= step;
    if (std::abs(step) <= 1e-17L * std::max(1.0L, std::abs(x))) break;
  }
  return static_cast<double>(x);
}

PolyCoeffs rescaled_regret_coeffs(int T, int K) {
  if (T < 1 || K < 1) throw InvalidArgument("T and K must be positive");
  const long double t = T;
  std::vector<double> asc(K + 1, 0.0);
  for (int m = 0; m <= K; ++m) {
    long double c = 0.0L;
    for (int n = 0; n <= m; ++n) {
      BigInt inner(0);
      for (int d = 0; d <= m; ++d) {
        const BigInt term = binomial(m, d) * stirling_first_signed(d, d - n);
        if (d % 2 == 0) {
          inner += term;
        } else {
          inner -= term;
        }
      }
      if (inner == 0) continue;
      c += inner.convert_to<long double>() * std::pow(t, 0.5L * m - n);
    }
    asc[K - m] = static_cast<double>(binomial(K, m).convert_to<long double>() * c);
  }
  return PolyCoeffs(std::move(asc));
}

double regret_factor_finite(int T, int K) {
  if (K == 1) return 0.0;
  const double top = std::sqrt(static_cast<double>(T)) * (K - 1) + 1.0;
  return largest_real_root(rescaled_regret_coeffs(T, K), RootBracket{-1.0, top}, 1e-13);
}

}  // namespace bookie
