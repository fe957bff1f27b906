#pragma once

// Factorial powers, Stirling numbers of the first kind and elementary
// symmetric polynomials (ESPs). Everything is templated on the scalar so the
// same code runs in double, long double, MPFR floats and exact rationals.

#include "bookie/multiprecision.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bookie {

/// x (x-1) ... (x-m+1); the empty product (m = 0) is 1.
template <class R>
R falling_factorial(const R& x, int m) {
  R out(1);
  for (int i = 0; i < m; ++i) out *= x - R(i);
  return out;
}

/// x (x+1) ... (x+m-1); the empty product (m = 0) is 1.
template <class R>
R rising_factorial(const R& x, int m) {
  R out(1);
  for (int i = 0; i < m; ++i) out *= x + R(i);
  return out;
}

BigInt binomial(int n, int k);

/// Unsigned Stirling number of the first kind c(n, k). Zero outside 0 <= k <= n.
BigInt stirling_first_unsigned(int n, int k);

/// Signed Stirling number s(n, k) = (-1)^(n-k) c(n, k). Zero outside 0 <= k <= n.
BigInt stirling_first_signed(int n, int k);

/// Exact integer to R conversion that works for builtin and Boost types.
template <class R>
R big_to(const BigInt& n) {
  if constexpr (std::is_arithmetic_v<R>) {
    return static_cast<R>(n.convert_to<long double>());
  } else if constexpr (is_exact_v<R>) {
    return R(n);
  } else {
    return R(n.str());
  }
}

/// Rows 0..n_max of the memoized table (process-wide, built once on first use).
inline constexpr int kStirlingTableMax = 64;

/// sigma_0..sigma_K of v via the running product prod_k (1 + v(k) t).
template <class R>
std::vector<R> esp_all(std::span<const R> v) {
  std::vector<R> sigma(v.size() + 1, R(0));
  sigma[0] = R(1);
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (std::size_t m = k + 1; m >= 1; --m) sigma[m] += v[k] * sigma[m - 1];
  }
  return sigma;
}

template <class R>
std::vector<R> esp_all(const std::vector<R>& v) {
  return esp_all(std::span<const R>(v));
}

/// K x K matrix with entry (k, j) = sigma_j(v without coordinate k), j = 0..K-1.
template <class R>
class PartialEspMatrix {
 public:
  PartialEspMatrix() = default;
  explicit PartialEspMatrix(std::size_t K) : K_(K), a_(K * K, R(0)) {}

  std::size_t dim() const { return K_; }
  R& operator()(std::size_t k, std::size_t j) { return a_[k * K_ + j]; }
  const R& operator()(std::size_t k, std::size_t j) const { return a_[k * K_ + j]; }

  std::span<const R> row(std::size_t k) const {
    return std::span<const R>(a_).subspan(k * K_, K_);
  }

 private:
  std::size_t K_ = 0;
  std::vector<R> a_;
};

enum class PespMethod {
  // a_{m+1} = sigma_m(v) 1 - v (.) a_m, run forward from a_1 = 1.
  forward,
  // Forward while the subtraction does not cancel, then the same recurrence
  // solved backwards from sigma_{K-1}(v\k) = sigma_K(v) / v(k).
  two_sided,
};

namespace detail {

template <class R>
R abs_value(const R& x) {
  using std::abs;
  return abs(x);
}

}  // namespace detail

template <class R>
PartialEspMatrix<R> esp_partial_matrix(std::span<const R> v, PespMethod method) {
  const std::size_t K = v.size();
  PartialEspMatrix<R> a(K);
  if (K == 0) return a;
  const std::vector<R> sigma = esp_all(v);
  for (std::size_t k = 0; k < K; ++k) {
    a(k, 0) = R(1);
    std::size_t filled = 0;  // a(k, 0..filled) are known
    const bool backward_ok = method == PespMethod::two_sided && v[k] != R(0);
    while (filled + 1 < K) {
      const R sub = v[k] * a(k, filled);
      const R next = sigma[filled + 1] - sub;
      if (backward_ok) {
        using detail::abs_value;
        const R scale = abs_value(sigma[filled + 1]) > abs_value(sub)
                            ? abs_value(sigma[filled + 1])
                            : abs_value(sub);
        if (abs_value(next) * R(2) < scale) break;
      }
      a(k, ++filled) = next;
    }
    if (filled + 1 < K) {
      a(k, K - 1) = sigma[K] / v[k];
      for (std::size_t j = K - 1; j > filled + 1; --j) {
        a(k, j - 1) = (sigma[j] - a(k, j)) / v[k];
      }
    }
  }
  return a;
}

template <class R>
PartialEspMatrix<R> esp_partial_matrix(std::span<const R> v) {
  return esp_partial_matrix(v, PespMethod::forward);
}

template <class R>
PartialEspMatrix<R> esp_partial_matrix(const std::vector<R>& v,
                                       PespMethod method = PespMethod::forward) {
  return esp_partial_matrix(std::span<const R>(v), method);
}

/// sigma_n(t 1 - x) for n = 0..K through the binomial expansion
/// sum_i (-1)^i sigma_i(x) C(K-i, n-i) t^(n-i).
template <class R>
std::vector<R> esp_shifted(std::span<const R> x, const R& t) {
  const int K = static_cast<int>(x.size());
  const std::vector<R> sx = esp_all(x);
  std::vector<R> tpow(K + 1, R(1));
  for (int i = 1; i <= K; ++i) tpow[i] = tpow[i - 1] * t;
  std::vector<R> out(K + 1, R(0));
  for (int n = 0; n <= K; ++n) {
    R acc(0);
    for (int i = 0; i <= n; ++i) {
      R term = sx[i] * big_to<R>(binomial(K - i, n - i)) * tpow[n - i];
      if (i % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    out[n] = acc;
  }
  return out;
}

template <class R>
std::vector<R> esp_shifted(const std::vector<R>& x, const R& t) {
  return esp_shifted(std::span<const R>(x), t);
}

}  // namespace bookie
