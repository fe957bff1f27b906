#include "bookie/loss_poly.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace bookie;

namespace {

std::vector<double> coeffs_of(const PolyCoeffs& p) { return p.coeffs(); }

}  // namespace

TEST_CASE("denominator and numerator") {
  CHECK(denom_eval(5, std::vector<double>{}) == 1.0);
  CHECK(denom_eval(0, std::vector<double>{2, 3}) == 6.0);
  CHECK(denom_eval(2, std::vector<double>{4, 6}) == 6.0);
  CHECK(denom_eval(3, std::vector<double>{4, 6}) == 0.0);
  CHECK(num_eval(1, std::vector<double>{6}) == 6.0);
  CHECK(num_eval(1, std::vector<double>{2, 2}) == 4.0);
  CHECK(num_eval(3, std::vector<double>{}) == 3.0);
  CHECK_THROWS_AS(num_eval(0, std::vector<double>{1}), InvalidArgument);
}

TEST_CASE("certified denominator sign") {
  const std::vector<double> v{4, 6};
  CHECK(denom_eval_certified(2, v).sign == 1);
  const auto z = denom_eval_certified(3, v);
  CHECK(z.sign == 0);
  CHECK(z.relative == 0.0);
  CHECK(denom_eval_certified(2, std::vector<double>{2, 2}).sign == -1);
}

TEST_CASE("biased coefficients") {
  CHECK(coeffs_of(biased_coeffs(4, std::vector<double>{0, 0})) == std::vector<double>{12, -8, 1});
  const auto q = biased_coeffs(3, std::vector<double>{0.8, 1.2});
  CHECK(q[2] == 1.0);
  CHECK(q[1] == doctest::Approx(-8.0));
  CHECK(q[0] == doctest::Approx(12.96));
  CHECK(coeffs_of(biased_coeffs(1, std::vector<double>{1, 1})) == std::vector<double>{3, -4, 1});
}

TEST_CASE("optimal loss polynomial") {
  CHECK(coeffs_of(opt_poly_coeffs<double>(4, 2)) == std::vector<double>{12, -8, 1});
  CHECK(coeffs_of(opt_poly_coeffs<double>(2, 3)) == std::vector<double>{0, 6, -6, 1});
  for (int T = 1; T <= 9; ++T) {
    for (int K = 1; K <= 7; ++K) {
      CHECK(opt_poly_coeffs<Rational>(T, K) ==
            biased_coeffs(T, std::vector<Rational>(K, Rational(0))));
    }
  }
}

TEST_CASE("opportunistic polynomial equals the shifted denominator") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const int H = 1 + trial % 8;
    const int K = 1 + (trial / 8) % 6;
    std::vector<Rational> s;
    for (int k = 0; k < K; ++k) s.emplace_back(num(rng), den(rng));
    const Rational x(num(rng), den(rng));
    std::vector<Rational> v;
    for (const auto& sk : s) v.push_back(x - sk);
    CHECK(biased_coeffs(H, s)(x) == denom_eval(H, v));
  }
}

TEST_CASE("largest real root") {
  CHECK(largest_real_root(PolyCoeffs({12, -8, 1}), RootBracket{0, 20}, 1e-12) ==
        doctest::Approx(6.0).epsilon(1e-12));
  CHECK(largest_real_root(PolyCoeffs({12.96, -8, 1}), RootBracket{0, 20}, 1e-12) ==
        doctest::Approx(5.743559577416269).epsilon(1e-12));
  CHECK(largest_real_root(PolyCoeffs({3, -4, 1}), 1e-12) == doctest::Approx(3.0));
  // Negative leading coefficient is normalized.
  CHECK(largest_real_root(PolyCoeffs({-3, 4, -1}), 1e-12) == doctest::Approx(3.0));
  // Double root.
  CHECK(largest_real_root(PolyCoeffs({4, -4, 1}), RootBracket{0, 10}, 1e-9) ==
        doctest::Approx(2.0).epsilon(1e-8));
  // No root: x^2 + 1.
  CHECK_THROWS_AS(largest_real_root(PolyCoeffs({1, 0, 1}), RootBracket{-3, 3}, 1e-9),
                  NoRealRootInBracket);
  // Negative at the upper end.
  CHECK_THROWS_AS(largest_real_root(PolyCoeffs({12, -8, 1}), RootBracket{0, 5}, 1e-9),
                  NoRealRootInBracket);
}

TEST_CASE("optimal loss examples") {
  CHECK(optimal_loss(4, 2) == 6.0);
  for (int K = 1; K <= 6; ++K) CHECK(optimal_loss(1, K) == doctest::Approx(K).epsilon(1e-12));
  CHECK(optimal_loss(2, 3) == doctest::Approx(3.0 + std::sqrt(3.0)).epsilon(1e-14));
  CHECK(regret(9, 2) == 3.0);
  for (int K = 1; K <= 8; ++K) CHECK(regret(1, K) == doctest::Approx(K - 1).epsilon(1e-12));
  CHECK_THROWS_AS(optimal_loss(0, 2), InvalidArgument);
}

TEST_CASE("root extraction agrees with the closed forms") {
  for (int T = 1; T <= 1000; T += (T < 50 ? 1 : 37)) {
    const std::vector<double> z2(2, 0.0), z3(3, 0.0);
    CHECK(std::abs(opportunistic_loss(T, z2) - (T + std::sqrt(double(T)))) <= 1e-9);
    CHECK(std::abs(opportunistic_loss(T, z3) - optimal_loss_cardano(T)) <= 1e-9);
  }
}

TEST_CASE("opportunistic loss") {
  const std::vector<double> s{0.8, 1.2};
  CHECK(std::abs(opportunistic_loss(3, s) - 5.743559577416269) <= 1e-10);
  CHECK(opportunistic_loss(1, std::vector<double>{1, 1}) == doctest::Approx(3.0).epsilon(1e-12));
  for (int K = 1; K <= 6; ++K) {
    for (int H = 1; H <= 12; ++H) {
      CHECK(std::abs(opportunistic_loss(H, std::vector<double>(K, 0.0), 1e-13) -
                     optimal_loss(H, K, 1e-13)) <= 1e-12);
    }
  }
  const auto b = opportunistic_loss_bracket(3, s, 1e-9);
  CHECK(b.hi - b.lo <= 1e-9);
  CHECK(b.lo <= 5.743559577416269);
  CHECK(b.hi >= 5.743559577416269);
}

TEST_CASE("uniform translation and monotonicity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  const double tol = 1e-10;
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 2 + trial % 5;
    const int H = 1 + trial % 7;
    std::vector<double> s(K);
    for (double& x : s) x = u(rng);
    const double base = opportunistic_loss(H, s, tol);
    const double c = u(rng) - 2.5;
    std::vector<double> shifted = s;
    for (double& x : shifted) x += c;
    CHECK(std::abs(opportunistic_loss(H, shifted, tol) - (base + c)) <= 2 * tol + 1e-12 * base);

    std::vector<double> up = s;
    for (double& x : up) x += 0.5 * u(rng) * (rng() % 2);
    CHECK(opportunistic_loss(H, up, tol) >= base - tol);
    std::vector<double> strict = s;
    strict[trial % K] += 0.1 + 0.1 * u(rng);
    CHECK(opportunistic_loss(H, strict, tol) > base + tol);
  }
}

TEST_CASE("subadditivity over blocks of rounds") {
  for (int K = 1; K <= 6; ++K) {
    for (int T = 1; T <= 20; ++T) {
      for (int m = 1; m <= 5; ++m) {
        CHECK(optimal_loss(m * T, K) <= m * optimal_loss(T, K) + 1e-9);
      }
    }
  }
}

TEST_CASE("loss grows with the number of outcomes") {
  for (int T = 1; T <= 30; ++T) {
    for (int K = 1; K < 12; ++K) CHECK(optimal_loss(T, K + 1) >= optimal_loss(T, K));
  }
  double prev = 0.0;
  for (int K = 2; K <= 40; ++K) {
    const double r = regret(2, K) / std::sqrt(2.0);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("large horizons stay accurate") {
  // Coefficients of P reach 1e400 here; the target evaluates through ESPs.
  const double l = optimal_loss(1000000, 8);
  const double beta = regret_factor_finite(1000000, 8);
  CHECK(std::abs((l - 1e6) / 1e3 - beta) < 1e-6);
  const std::vector<double> z3(3, 0.0);
  CHECK(std::abs(opportunistic_loss(1000000, z3) - optimal_loss_cardano(1000000)) < 1e-7);
  CHECK(optimal_loss(1000000, 64) > 1e6);
}

TEST_CASE("hermite polynomials") {
  CHECK(coeffs_of(hermite_coeffs(2)) == std::vector<double>{-1, 0, 1});
  CHECK(coeffs_of(hermite_coeffs(3)) == std::vector<double>{0, -3, 0, 1});
  CHECK(coeffs_of(hermite_coeffs(4)) == std::vector<double>{3, 0, -6, 0, 1});
  CHECK(regret_factor_asymptotic(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(regret_factor_asymptotic(4) - std::sqrt(3 + std::sqrt(6.0))) <= 1e-12);
  CHECK(std::abs(regret_factor_asymptotic(5) - std::sqrt(5 + std::sqrt(10.0))) <= 1e-12);
  // High-precision reference values.
  CHECK(std::abs(regret_factor_asymptotic(4) - 2.334414218338977239) <= 1e-14);
  CHECK(std::abs(regret_factor_asymptotic(5) - 2.856970013872805654) <= 1e-14);
  for (int K = 1; K <= 64; ++K) {
    const auto [a, b] = regret_factor_bounds(K);
    const double beta = regret_factor_asymptotic(K);
    CHECK(a <= beta);
    CHECK(beta <= b);
  }
  CHECK(std::abs(regret_factor_asymptotic(64) / 16.0 - 1.0) < 0.08);
}

TEST_CASE("rescaled regret polynomial") {
  for (int T : {1, 2, 5, 10, 100}) {
    CHECK(coeffs_of(rescaled_regret_coeffs(T, 2)) == std::vector<double>{-1, 0, 1});
  }
  for (int K = 2; K <= 7; ++K) {
    for (int T : {1, 3, 10, 200}) {
      CHECK(regret_factor_finite(T, K) ==
            doctest::Approx(regret(T, K) / std::sqrt(double(T))).epsilon(1e-9));
    }
  }
  // Converges to the Hermite root.
  CHECK(std::abs(regret_factor_finite(100000000, 6) - regret_factor_asymptotic(6)) < 1e-3);
  CHECK(std::abs(regret(1000000, 3) / 1e3 - std::sqrt(3.0)) <= 0.01);
}

TEST_CASE("optimal loss against high-precision references") {
  // tests/oracles/optimal_loss_reference.py
  struct Ref {
    int T, K;
    double loss;
  };
  const Ref refs[] = {
      {100, 5, 129.9210563665502880},       {1000, 10, 1158.502211246009461},
      {1000000, 8, 1004147.938710055225},   {1000000, 16, 1006640.531982717509},
      {1000000, 64, 1014939.041016010589}, {50, 40, 160.9082923713612540},
  };
  for (const auto& r : refs) {
    CAPTURE(r.T);
    CAPTURE(r.K);
    CHECK(std::abs(optimal_loss(r.T, r.K) - r.loss) <= 2e-10 * std::max(1.0, r.loss / 1e4));
  }
}
