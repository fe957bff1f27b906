#include "bookie/engine.hpp"

#include "bookie/adaptive.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

namespace bookie {

EngineMode EngineMode::with_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("epsilon must be positive");
  EngineMode m;
  m.kind = Kind::epsilon;
  m.epsilon = eps;
  return m;
}

std::vector<double> validate_bet(std::span<const double> q, std::size_t K) {
  if (q.size() != K) {
    throw InvalidBet("bet has " + std::to_string(q.size()) + " entries, expected " +
                     std::to_string(K));
  }
  double sum = 0.0;
  for (double x : q) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidBet("bet entries must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kBetSumTol) {
    throw InvalidBet("bet entries sum to " + std::to_string(sum) + ", not 1");
  }
  std::vector<double> out(q.begin(), q.end());
  // Leave sums that are 1 up to rounding alone, so validation is idempotent.
  if (std::abs(sum - 1.0) > 8.0 * static_cast<double>(K) * DBL_EPSILON) {
    for (double& x : out) x /= sum;
  }
  return out;
}

bool is_decisive(std::span<const double> q) {
  return !q.empty() && *std::max_element(q.begin(), q.end()) >= 1.0 - kDecisiveTol;
}

OddsVector optimal_odds(int H, std::span<const double> v) {
  const int K = static_cast<int>(v.size());
  if (K == 0) throw InvalidArgument("empty residual vector");
  if (H < 0) throw InvalidArgument("horizon must be nonnegative");
  for (double x : v) {
    if (!std::isfinite(x) || !(x > 0.0)) {
      throw InvalidArgument("residual vector must be finite and positive");
    }
  }
  if (K == 1) return {1.0};
  auto attempt = [&]<class R>(bool last) -> std::optional<OddsVector> {
    using std::abs;
    std::vector<R> vr(v.begin(), v.end());
    const auto a = esp_partial_matrix(vr, PespMethod::two_sided);
    const std::vector<R> w = detail::rising_neg_table<R>(H, K - 1);
    const R u((8 * K + 16) * unit_roundoff<R>());
    std::vector<R> num(K);
    bool good = true;
    for (int k = 0; k < K; ++k) {
      R acc(0), bound(0);
      for (int m = 0; m < K; ++m) {
        const R term = w[K - 1 - m] * a(k, m);
        acc += term;
        bound += abs(term);
      }
      num[k] = acc;
      if (!(acc > R(0)) || bound * u > acc * R(1e-13)) good = false;
    }
    if (!good && !last) return std::nullopt;
    R total(0);
    for (const R& n : num) {
      if (!(n > R(0))) throw InvalidArgument("residual vector is off the achievable frontier");
      total += n;
    }
    OddsVector r(K);
    for (int k = 0; k < K; ++k) r[k] = to_double(R(num[k] / total));
    return r;
  };
  return detail::with_adaptive_precision(attempt);
}

std::vector<double> apply_overround(std::span<const double> r, double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be >= 1");
  std::vector<double> out;
  out.reserve(r.size());
  for (double x : r) {
    if (!(x > 0.0)) throw InvalidArgument("odds must be positive");
    out.push_back(1.0 / (gamma * x));
  }
  return out;
}

double epsilon_oracle(int H, std::span<const double> s, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  try {
    return opportunistic_loss_bracket(H, s, 0.5 * eps).hi;
  } catch (const NoRealRootInBracket&) {
    return std::numeric_limits<double>::infinity();
  }
}

Engine Engine::create(int K, int T, EngineMode mode, double tol) {
  if (K < 1) throw InvalidArgument("K must be at least 1");
  if (T < 1) throw InvalidArgument("T must be at least 1");
  Engine e;
  e.tol_ = tol;
  e.st_.K = K;
  e.st_.T = T;
  e.st_.mode = mode;
  e.paid_.assign(K, 0.0);
  if (mode.is_exact()) {
    e.st_.s.assign(K, 0.0);
    e.st_.L = optimal_loss(T, K, tol);
  } else {
    e.st_.s.assign(K, mode.epsilon);
    e.st_.L = e.solve_loss(T);
  }
  return e;
}

Engine Engine::resume(int H, std::vector<double> s, EngineMode mode, double tol) {
  if (s.empty()) throw InvalidArgument("state must have at least one outcome");
  if (H < 1) throw InvalidArgument("horizon must be at least 1");
  for (double x : s) {
    if (!std::isfinite(x)) throw InvalidArgument("state entries must be finite");
  }
  Engine e;
  e.tol_ = tol;
  e.st_.K = static_cast<int>(s.size());
  e.st_.T = H;
  e.st_.mode = mode;
  e.paid_ = s;
  e.fresh_ = std::all_of(s.begin(), s.end(), [&](double x) { return x == s[0]; });
  e.st_.s = std::move(s);
  if (!mode.is_exact()) {
    for (double& x : e.st_.s) x += mode.epsilon;
  }
  e.st_.L = e.solve_loss(H);
  return e;
}

double Engine::solve_loss(int H) const {
  if (st_.mode.is_exact()) return opportunistic_loss(H, st_.s, tol_);
  const double L = epsilon_oracle(H, st_.s, st_.mode.epsilon);
  if (!std::isfinite(L)) throw NoRealRootInBracket("epsilon oracle found no root");
  return L;
}

std::vector<double> Engine::residual_vector() const {
  std::vector<double> v(st_.K);
  for (int k = 0; k < st_.K; ++k) v[k] = st_.L - st_.s[k];
  return v;
}

OddsVector Engine::quote_current() const {
  return optimal_odds(st_.horizon() - 1, residual_vector());
}

OddsVector Engine::quote_first() {
  if (st_.done || st_.t != 1 || st_.last_odds) throw OutOfOrder("first odds already quoted");
  OddsVector r = fresh_ ? OddsVector(st_.K, 1.0 / st_.K) : quote_current();
  st_.last_odds = r;
  return r;
}

std::optional<OddsVector> Engine::observe_and_quote(std::span<const double> q) {
  if (st_.done) throw GameOver("all " + std::to_string(st_.T) + " rounds have been played");
  if (!st_.last_odds) throw OutOfOrder("odds must be quoted before a bet");
  const std::vector<double> bet = validate_bet(q, st_.K);
  const OddsVector& r = *st_.last_odds;
  for (int k = 0; k < st_.K; ++k) {
    const double inc = bet[k] / r[k];
    paid_[k] += inc;
    st_.s[k] += inc;
  }
  if (st_.t == st_.T) {
    st_.done = true;
    return std::nullopt;
  }
  ++st_.t;
  if (!is_decisive(bet)) {
    if (!st_.mode.is_exact()) {
      for (double& x : st_.s) x += st_.mode.epsilon;
    }
    st_.L = solve_loss(st_.horizon());
  }
  OddsVector next = quote_current();
  st_.last_odds = next;
  return next;
}

namespace {

void mixture_walk(const Engine& e, std::span<const double> history, std::size_t depth,
                  double weight, OddsVector& acc) {
  if (depth == history.size()) {
    const OddsVector& r = *e.state().last_odds;
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += weight * r[k];
    return;
  }
  const double p = history[depth];
  const double weights[2] = {p, 1.0 - p};
  for (int outcome = 0; outcome < 2; ++outcome) {
    if (weights[outcome] == 0.0) continue;
    Engine next = e;
    const double bet[2] = {outcome == 0 ? 1.0 : 0.0, outcome == 1 ? 1.0 : 0.0};
    next.observe_and_quote(bet);
    mixture_walk(next, history, depth + 1, weight * weights[outcome], acc);
  }
}

}  // namespace

OddsVector odg_mixture_quote(std::span<const double> history, int T, int K) {
  if (K != 2) throw InvalidArgument("the mixture baseline is defined for K = 2 only");
  if (T < 1) throw InvalidArgument("T must be at least 1");
  if (static_cast<int>(history.size()) > T - 1) {
    throw InvalidArgument("history is longer than T - 1 rounds");
  }
  if (static_cast<int>(history.size()) + 1 > kMixtureMaxRound) {
    throw TooLarge("mixture enumeration is limited to round " + std::to_string(kMixtureMaxRound));
  }
  for (double p : history) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidBet("history entries must lie in [0, 1]");
  }
  Engine root = Engine::create(2, T);
  root.quote_first();
  OddsVector acc(2, 0.0);
  mixture_walk(root, history, 0, 1.0, acc);
  return acc;
}

}  // namespace bookie
