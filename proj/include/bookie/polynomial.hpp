#pragma once

// Dense univariate polynomials and a largest-real-root solver with certified
// signs.

#include "bookie/multiprecision.hpp"

#include <cstddef>
#include <vector>

namespace bookie {

/// Real polynomial with ascending-degree coefficients. Trailing zeros are
/// trimmed on construction so the leading coefficient is nonzero (unless the
/// polynomial is identically zero, which keeps a single 0 coefficient).
template <class R>
class Polynomial {
 public:
  Polynomial() : c_{R(0)} {}
  explicit Polynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<R>& coeffs() const { return c_; }
  const R& operator[](std::size_t i) const { return c_[i]; }
  const R& leading() const { return c_.back(); }
  bool is_zero() const { return c_.size() == 1 && c_[0] == R(0); }

  R operator()(const R& x) const {
    R acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (c_.size() > 1 && c_.back() == R(0)) c_.pop_back();
    if (c_.empty()) c_.push_back(R(0));
  }

  std::vector<R> c_;
};

using PolyCoeffs = Polynomial<double>;

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Evaluation of F at one point, as seen by the root solver.
struct PointEvaluation {
  int sign = 0;         // sign of F(x); 0 when exactly zero or not certifiable
  bool certain = true;  // error bound below |F(x)|
  double g = 0.0;       // F'(x) / F(x)
  double h = 0.0;       // F''(x) / F(x)
};

/// Anything whose largest real root the solver can isolate.
class RootTarget {
 public:
  virtual ~RootTarget() = default;
  virtual int degree() const = 0;
  /// Escalates precision until the running error bound is at most
  /// rel_accuracy * |F(x)| (or the finest precision is reached).
  virtual PointEvaluation evaluate(double x, double rel_accuracy) const = 0;
};

/// Narrows `bracket` to a sub-interval [lo, hi] of width <= tol that contains
/// the largest real root, with F(lo) < 0 <= F(hi) (or lo == hi at an exact
/// zero). Requires a positive leading coefficient, F(bracket.hi) >= 0 and the
/// largest root inside the bracket. Throws NoRealRootInBracket otherwise.
RootBracket isolate_largest_root(const RootTarget& f, RootBracket bracket, double tol);

/// Coefficient-form target: Horner with a running error bound.
class CoefficientTarget final : public RootTarget {
 public:
  explicit CoefficientTarget(PolyCoeffs p) : p_(std::move(p)) {}
  int degree() const override { return p_.degree(); }
  PointEvaluation evaluate(double x, double rel_accuracy) const override;

 private:
  PolyCoeffs p_;
};

/// Largest real root of p inside `bracket`, to within tol.
double largest_real_root(const PolyCoeffs& p, RootBracket bracket, double tol);

/// Same, with the Cauchy bound 1 + max|c_i / c_n| as the upper bracket end.
double largest_real_root(const PolyCoeffs& p, double tol);

}  // namespace bookie
