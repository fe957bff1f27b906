#include "bookie/combinatorics.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace bookie;

namespace {

// sigma_m over the given index set by subset enumeration.
template <class R>
std::vector<R> esp_brute(const std::vector<R>& v) {
  const std::size_t K = v.size();
  std::vector<R> out(K + 1, R(0));
  for (unsigned mask = 0; mask < (1u << K); ++mask) {
    R prod(1);
    int bits = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (mask & (1u << k)) {
        prod *= v[k];
        ++bits;
      }
    }
    out[bits] += prod;
  }
  return out;
}

template <class R>
std::vector<R> drop(const std::vector<R>& v, std::size_t k) {
  std::vector<R> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != k) out.push_back(v[i]);
  }
  return out;
}

std::vector<Rational> random_rationals(std::mt19937_64& rng, int K, int lo, int hi) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 9);
  std::vector<Rational> v;
  for (int k = 0; k < K; ++k) v.emplace_back(num(rng), den(rng));
  return v;
}

}  // namespace

TEST_CASE("factorial powers") {
  CHECK(falling_factorial(5.0, 3) == 60.0);
  CHECK(falling_factorial(7.0, 0) == 1.0);
  CHECK(rising_factorial(-4.0, 2) == 12.0);
  CHECK(falling_factorial(4.0, 2) == 12.0);
  CHECK(rising_factorial(3.0, 0) == 1.0);
  CHECK(rising_factorial(-2.0, 3) == 0.0);
  CHECK(falling_factorial(-4.0, 2) == 20.0);
}

TEST_CASE("falling factorial identities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> real(-6.0, 12.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Rational x = trial % 2 == 0 ? Rational(static_cast<int>(real(rng)))
                                      : Rational(static_cast<long long>(real(rng) * 64), 64);
    for (int m = 0; m <= 8; ++m) {
      CHECK(x * falling_factorial(Rational(x - 1), m) == falling_factorial(x, m + 1));
      if (m >= 1) {
        CHECK(falling_factorial(x, m) + Rational(m) * falling_factorial(x, m - 1) ==
              falling_factorial(Rational(x + 1), m));
      }
      const Rational sign = m % 2 == 0 ? Rational(1) : Rational(-1);
      CHECK(falling_factorial(x, m) == sign * rising_factorial(Rational(-x), m));
    }
  }
}

TEST_CASE("stirling numbers of the first kind") {
  CHECK(stirling_first_signed(0, 0) == 1);
  CHECK(stirling_first_signed(3, 1) == 2);
  CHECK(stirling_first_signed(4, 2) == 11);
  CHECK(stirling_first_signed(4, 3) == -6);
  CHECK(stirling_first_signed(3, 5) == 0);
  CHECK(stirling_first_signed(-1, 0) == 0);
  CHECK(stirling_first_unsigned(5, 0) == 0);
  // Beyond the memo table the values continue the same recurrence.
  const int n = kStirlingTableMax + 3;
  CHECK(stirling_first_unsigned(n + 1, 7) ==
        BigInt(n) * stirling_first_unsigned(n, 7) + stirling_first_unsigned(n, 6));
  CHECK(stirling_first_unsigned(n, n) == 1);
}

TEST_CASE("falling factorial expands through signed stirling numbers") {
  for (int n = 0; n <= 12; ++n) {
    for (int xi = -5; xi <= 15; ++xi) {
      const Rational x(xi, 3);
      Rational poly(0), xp(1);
      for (int k = 0; k <= n; ++k) {
        poly += Rational(stirling_first_signed(n, k)) * xp;
        xp *= x;
      }
      CHECK(poly == falling_factorial(x, n));
    }
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(0, 0) == 1);
}

TEST_CASE("esp_all") {
  CHECK(esp_all(std::vector<double>{1, 2, 3}) == std::vector<double>{1, 6, 11, 6});
  CHECK(esp_all(std::vector<double>{0, 0, 0, 0}) == std::vector<double>{1, 0, 0, 0, 0});
  CHECK(esp_all(std::vector<double>{5, 5}) == std::vector<double>{1, 10, 25});
  CHECK(esp_all(std::vector<double>{}) == std::vector<double>{1});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_rationals(rng, 1 + trial % 9, -9, 9);
    CHECK(esp_all(v) == esp_brute(v));
  }
}

TEST_CASE("esp recurrence and reduced sums are exact over rationals") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 1 + trial % 12;
    const auto v = random_rationals(rng, K, -20, 20);
    const auto sigma = esp_all(v);
    for (int k = 0; k < K; ++k) {
      const auto sub = esp_all(drop(v, k));
      for (int m = 1; m <= K; ++m) {
        const Rational tail = m < K ? sub[m] : Rational(0);
        CHECK(sigma[m] == v[k] * sub[m - 1] + tail);
      }
    }
    for (int m = 0; m <= K; ++m) {
      Rational acc(0);
      for (int i = 0; i < K; ++i) {
        const auto sub = esp_all(drop(v, i));
        if (m < K) acc += sub[m];
      }
      CHECK(acc == Rational(K - m) * sigma[m]);
    }
  }
}

TEST_CASE("partial esp matrix") {
  const std::vector<double> v{1, 2, 3};
  const auto a = esp_partial_matrix(v);
  CHECK(a(0, 0) == 1);
  CHECK(a(0, 1) == 5);
  CHECK(a(0, 2) == 6);
  CHECK(a(1, 1) == 4);
  CHECK(a(1, 2) == 3);
  CHECK(a(2, 1) == 3);
  CHECK(a(2, 2) == 2);

  const std::vector<double> c(5, 1.5);
  const auto ac = esp_partial_matrix(c);
  const auto ref = esp_all(std::vector<double>(4, 1.5));
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(ac(k, j) == doctest::Approx(ref[j]));
  }
}

TEST_CASE("partial esp matrix matches subset enumeration") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + trial % 10;
    const auto v = random_rationals(rng, K, -15, 15);
    const auto a = esp_partial_matrix(v);
    for (int k = 0; k < K; ++k) {
      const auto ref = esp_brute(drop(v, k));
      for (int j = 0; j < K; ++j) CHECK(a(k, j) == ref[j]);
    }
  }
}

TEST_CASE("two-sided partial esp stays accurate for spread positive vectors") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int K = 8 + trial;
    std::vector<double> v(K);
    std::vector<Rational> vq(K);
    for (int k = 0; k < K; ++k) {
      v[k] = 1.0 + 1e4 * unit(rng) * unit(rng);
      vq[k] = Rational(v[k]);
    }
    const auto a = esp_partial_matrix(v, PespMethod::two_sided);
    const auto exact = esp_partial_matrix(vq);
    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        const double ref = exact(k, j).convert_to<double>();
        worst = std::max(worst, std::abs(a(k, j) - ref) / ref);
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("shifted esp") {
  CHECK(esp_shifted(std::vector<double>{0, 0, 0}, 1.0) == std::vector<double>{1, 3, 3, 1});
  CHECK(esp_shifted(std::vector<double>{1, 2}, 3.0) == std::vector<double>{1, 3, 2});

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + trial % 8;
    const auto x = random_rationals(rng, K, -10, 10);
    const Rational t(static_cast<int>(rng() % 21) - 10, 7);
    std::vector<Rational> shifted;
    for (const auto& xi : x) shifted.push_back(t - xi);
    CHECK(esp_shifted(x, t) == esp_all(shifted));
  }
}
