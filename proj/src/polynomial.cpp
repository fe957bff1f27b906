#include "bookie/polynomial.hpp"

#include "bookie/adaptive.hpp"
#include "bookie/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace bookie {

namespace {

// Laguerre only needs F'/F and F''/F to a few digits.
constexpr double kRatioAccuracy = 1e-3;
constexpr int kMaxLaguerreSteps = 500;
constexpr int kScanCells = 64;

int certified_sign(const RootTarget& f, double x) { return f.evaluate(x, 0.0).sign; }

// F(lo) < 0 <= F(hi); halves until the width is at most tol or no double
// lies strictly between the ends.
RootBracket bisect(const RootTarget& f, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const int s = certified_sign(f, mid);
    if (s == 0) return {mid, mid};
    if (s < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

// Descending scan for the rightmost negative sample below `top`.
RootBracket scan_then_bisect(const RootTarget& f, double lo, double top, double tol) {
  double prev = top;
  for (int i = 1; i <= kScanCells; ++i) {
    const double y = i == kScanCells ? lo : top - (top - lo) * i / kScanCells;
    const int s = certified_sign(f, y);
    if (s == 0) return {y, y};
    if (s < 0) return bisect(f, y, prev, tol);
    prev = y;
  }
  throw NoRealRootInBracket("no sign change in [" + std::to_string(lo) + ", " +
                            std::to_string(top) + "]");
}

// Laguerre step length for a degree-n polynomial, from above the roots.
double laguerre_step(int n, double g, double h) {
  if (!(g > 0.0) || !std::isfinite(g) || !std::isfinite(h)) return -1.0;
  const double big_h = g * g - h;
  const double disc = (n - 1) * (n * big_h - g * g);
  const double denom = g + std::sqrt(std::max(disc, 0.0));
  return n / denom;
}

}  // namespace

RootBracket isolate_largest_root(const RootTarget& f, RootBracket bracket, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("root tolerance must be positive");
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) || bracket.lo > bracket.hi) {
    throw InvalidArgument("invalid root bracket");
  }
  const int n = f.degree();
  if (n < 1) throw NoRealRootInBracket("constant polynomial has no root");
  // Below a few ulps the probes would not move.
  const double ulp_hi = std::nextafter(std::abs(bracket.hi), HUGE_VAL) - std::abs(bracket.hi);
  tol = std::max(tol, 8.0 * ulp_hi);

  PointEvaluation at = f.evaluate(bracket.hi, kRatioAccuracy);
  if (at.sign < 0) throw NoRealRootInBracket("polynomial is negative at the upper bracket end");
  if (at.sign == 0) return {bracket.hi, bracket.hi};

  double x = bracket.hi;
  for (int step_count = 0; step_count < kMaxLaguerreSteps; ++step_count) {
    const double step = laguerre_step(n, at.g, at.h);
    if (!(step > 0.0) || !std::isfinite(step)) break;
    const double next = std::max(x - step, bracket.lo);
    if (x - next <= 0.5 * tol) {
      const double probe = std::max(x - tol, bracket.lo);
      const int s = certified_sign(f, probe);
      if (s < 0) return bisect(f, probe, x, tol);
      if (s == 0) return {probe, probe};
      if (probe == bracket.lo) {
        throw NoRealRootInBracket("polynomial stays positive down to the lower bracket end");
      }
      x = probe;
      at = f.evaluate(x, kRatioAccuracy);
      continue;
    }
    const PointEvaluation there = f.evaluate(next, kRatioAccuracy);
    if (there.sign < 0) return bisect(f, next, x, tol);
    if (there.sign == 0) return {next, next};
    if (next == bracket.lo) {
      throw NoRealRootInBracket("polynomial stays positive down to the lower bracket end");
    }
    x = next;
    at = there;
  }
  return scan_then_bisect(f, bracket.lo, x, tol);
}

PointEvaluation CoefficientTarget::evaluate(double x, double rel_accuracy) const {
  const auto& c = p_.coeffs();
  const int n = p_.degree();
  auto attempt = [&]<class R>(bool last) -> std::optional<PointEvaluation> {
    using std::abs;
    const R xr(x);
    const R ax = abs(xr);
    R p(0), d1(0), d2(0), bound(0);
    for (std::size_t i = c.size(); i-- > 0;) {
      d2 = d2 * xr + d1;
      d1 = d1 * xr + p;
      p = p * xr + R(c[i]);
      bound = bound * ax + abs(R(c[i]));
    }
    const R err = bound * R((2 * n + 4) * unit_roundoff<R>());
    const R mag = abs(p);
    const bool good = rel_accuracy > 0.0 ? err <= mag * R(rel_accuracy) : err < mag;
    if (!good && !last) return std::nullopt;
    PointEvaluation e;
    e.certain = err < mag;
    e.sign = (!e.certain || p == R(0)) ? 0 : (p > R(0) ? 1 : -1);
    if (p != R(0)) {
      e.g = to_double(R(d1 / p));
      e.h = to_double(R(R(2) * d2 / p));
    }
    return e;
  };
  return detail::with_adaptive_precision(attempt);
}

double largest_real_root(const PolyCoeffs& p, RootBracket bracket, double tol) {
  if (p.is_zero()) throw InvalidArgument("zero polynomial");
  if (p.leading() < 0.0) {
    std::vector<double> neg = p.coeffs();
    for (double& v : neg) v = -v;
    return largest_real_root(PolyCoeffs(std::move(neg)), bracket, tol);
  }
  const RootBracket b = isolate_largest_root(CoefficientTarget(p), bracket, tol);
  return 0.5 * (b.lo + b.hi);
}

double largest_real_root(const PolyCoeffs& p, double tol) {
  if (p.is_zero() || p.degree() < 1) throw NoRealRootInBracket("constant polynomial");
  double bound = 0.0;
  for (int i = 0; i < p.degree(); ++i) bound = std::max(bound, std::abs(p[i] / p.leading()));
  return largest_real_root(p, RootBracket{-(1.0 + bound), 1.0 + bound}, tol);
}

}  // namespace bookie
