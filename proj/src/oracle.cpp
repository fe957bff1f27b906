#include "bookie/oracle.hpp"

#include "bookie/game_sim.hpp"
#include "bookie/json_out.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

namespace bookie {

std::string CheckReport::to_json() const {
  JsonWriter w;
  w.begin_object().field("check", check).key("params").raw(params.empty() ? "{}" : params);
  w.field("observed", observed).field("expected", expected).field("tol", tol).field("pass", pass);
  w.end_object();
  return w.str();
}

bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

namespace {

std::vector<double> unit(int K, int k) {
  std::vector<double> e(K, 0.0);
  e[k] = 1.0;
  return e;
}

template <class V>
V without(const V& v, std::size_t k) {
  V out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != k) out.push_back(v[i]);
  }
  return out;
}

std::string hv_params(int H, const std::vector<double>& v) {
  JsonWriter w;
  w.begin_object().field("H", H).field("v", v).end_object();
  return w.str();
}

// ---- exhaustive ----------------------------------------------------------

void walk(const Engine& e, int K, int last, WorstCase& wc) {
  if (e.state().done) {
    const auto& p = e.payouts();
    const auto it = std::max_element(p.begin(), p.end());
    const double top = *it;
    wc.max = std::max(wc.max, top);
    wc.min = std::min(wc.min, top);
    ++wc.sequences;
    int ties = 0;
    for (double x : p) ties += (top - x <= 1e-9 * std::max(1.0, top)) ? 1 : 0;
    if (ties == 1) {
      ++wc.unique_argmax;
      if (it - p.begin() == last) ++wc.last_bet_wins;
    }
    return;
  }
  for (int k = 0; k < K; ++k) {
    Engine next = e;
    next.observe_and_quote(unit(K, k));
    walk(next, K, k, wc);
  }
}

// ---- grid minimax --------------------------------------------------------

void compositions(int n, int K, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == K - 1) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= n; ++c) {
    cur.push_back(c);
    compositions(n - c, K, cur, out);
    cur.pop_back();
  }
}

using GridState = std::array<double, 3>;

double grid_value(int H, const GridState& s, int K, const std::vector<GridState>& inv) {
  if (H == 0) return *std::max_element(s.begin(), s.begin() + K);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : inv) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K && worst < best; ++k) {
      GridState next = s;
      next[k] += g[k];
      worst = std::max(worst, grid_value(H - 1, next, K, inv));
    }
    best = std::min(best, worst);
  }
  return best;
}

// ---- identity fuzz -------------------------------------------------------

template <class R>
R random_value(Rng& rng, int lo, int hi) {
  const long long num = lo + static_cast<long long>(rng.below(hi - lo + 1));
  const long long den = 1 + static_cast<long long>(rng.below(9));
  if constexpr (is_exact_v<R>) {
    return R(num, den);
  } else {
    return R(static_cast<double>(num) / static_cast<double>(den));
  }
}

template <class R>
std::vector<R> random_vector(Rng& rng, int K, int lo, int hi) {
  std::vector<R> v(K);
  for (auto& x : v) x = random_value<R>(rng, lo, hi);
  return v;
}

template <class R>
R abs_of(const R& x) {
  return x < R(0) ? R(-x) : x;
}

// sum_m |rising(-H, K-m)| sigma_m(|v|): the natural size of D_{H,K}(v).
template <class R>
R denom_scale(int H, const std::vector<R>& v) {
  std::vector<R> av;
  for (const auto& x : v) av.push_back(abs_of(x));
  const int K = static_cast<int>(v.size());
  const auto w = detail::rising_neg_table<R>(H, K);
  const auto sigma = esp_all(av);
  R acc(0);
  for (int m = 0; m <= K; ++m) acc += abs_of(w[K - m]) * sigma[m];
  return acc;
}

template <class R>
double rel_gap(const R& a, const R& b, const R& scale) {
  const R gap = abs_of(R(a - b));
  if (gap == R(0)) return 0.0;
  return to_double(R(gap / (scale > R(0) ? scale : R(1))));
}

// sigma_0..sigma_K by subset enumeration, one product per subset.
template <class R>
std::vector<R> esp_subsets(const std::vector<R>& v) {
  const std::size_t K = v.size();
  std::vector<R> out(K + 1, R(0));
  std::vector<R> prod(std::size_t(1) << K);
  prod[0] = R(1);
  out[0] = R(1);
  for (std::size_t mask = 1; mask < prod.size(); ++mask) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    prod[mask] = prod[mask & (mask - 1)] * v[low];
    out[__builtin_popcountll(mask)] += prod[mask];
  }
  return out;
}

template <class R>
std::vector<CheckReport> identities_in(int instances, std::uint64_t seed) {
  Rng rng(seed);
  const bool exact = is_exact_v<R>;
  const double tol = exact ? 0.0 : 1e-9;
  const std::string mode = exact ? "rational" : "double";
  double worst_q = 0, worst_rec = 0, worst_sum = 0, worst_pesp = 0, worst_norm = 0, worst_front = 0;

  for (int i = 0; i < instances; ++i) {
    {  // Q_{H,s}(x) = D_{H,K}(x 1 - s)
      const int H = 1 + static_cast<int>(rng.below(8));
      const int K = 1 + static_cast<int>(rng.below(6));
      const auto s = random_vector<R>(rng, K, -20, 20);
      const R x = random_value<R>(rng, -20, 20);
      std::vector<R> v;
      for (const auto& sk : s) v.push_back(x - sk);
      const R lhs = biased_coeffs(H, s)(x);
      const R rhs = denom_eval(H, v);
      worst_q = std::max(worst_q, rel_gap(lhs, rhs, denom_scale(H, v)));
    }
    {  // D_{H,K}(v) = v_k D_{H,K-1}(v\k) - H D_{H-1,K-1}(v\k)
      const int H = 1 + static_cast<int>(rng.below(8));
      const int K = 1 + static_cast<int>(rng.below(6));
      const auto v = random_vector<R>(rng, K, -20, 20);
      const R whole = denom_eval(H, v);
      const R scale = denom_scale(H, v);
      for (int k = 0; k < K; ++k) {
        const auto sub = without(v, k);
        const R rhs = v[k] * denom_eval(H, sub) - R(H) * denom_eval(H - 1, sub);
        worst_rec = std::max(worst_rec, rel_gap(whole, rhs, scale));
      }
    }
    {  // sum_i sigma_m(v\i) = (K - m) sigma_m(v); partial ESPs by brute force
      const int K = 1 + static_cast<int>(rng.below(10));
      // Forward PESP loses digits on mixed signs in floating point, so the
      // double run uses the engine's setting: positive v, two-sided.
      const auto v = random_vector<R>(rng, K, exact ? -20 : 1, 20);
      const auto sigma = esp_all(v);
      std::vector<R> av;
      for (const auto& x : v) av.push_back(abs_of(x));
      const auto asig = esp_all(av);
      const auto a = esp_partial_matrix(v, exact ? PespMethod::forward : PespMethod::two_sided);
      std::vector<R> sums(K + 1, R(0));
      for (int k = 0; k < K; ++k) {
        const auto sub = without(v, k);
        const auto ref = esp_subsets(sub);
        const auto asub = esp_all(without(av, k));
        for (int m = 0; m < K; ++m) {
          sums[m] += ref[m];
          worst_pesp = std::max(worst_pesp, rel_gap(a(k, m), ref[m], asub[m]));
        }
      }
      for (int m = 0; m <= K; ++m) {
        worst_sum = std::max(worst_sum, rel_gap(sums[m], R(K - m) * sigma[m], R(R(K) * asig[m])));
      }
    }
    {  // On the frontier: sum_k D_{H-1,K-1}(v\k) = D_{H-1,K}(v)
      const int H = 1 + static_cast<int>(rng.below(8));
      const int K = 2 + static_cast<int>(rng.below(5));
      std::vector<R> v;
      R den(0);
      do {
        v = random_vector<R>(rng, K - 1, H * 9 + 1, H * 9 + 90);
        for (auto& x : v) x /= R(9);
        den = denom_eval(H, v);
      } while (den == R(0));
      v.push_back(R(H) * denom_eval(H - 1, v) / den);
      worst_front = std::max(worst_front, rel_gap(denom_eval(H, v), R(0), denom_scale(H, v)));
      R parts(0);
      for (int k = 0; k < K; ++k) parts += denom_eval(H - 1, without(v, k));
      worst_norm = std::max(worst_norm, rel_gap(parts, denom_eval(H - 1, v), denom_scale(H - 1, v)));
    }
  }

  auto report = [&](const char* name, double observed) {
    JsonWriter p;
    p.begin_object().field("instances", instances).field("seed", seed).field("arithmetic", mode);
    p.end_object();
    return CheckReport{name, p.str(), observed, 0.0, tol, observed <= tol};
  };
  return {
      report("identity.shifted_denominator", worst_q),
      report("identity.denominator_recurrence", worst_rec),
      report("identity.reduced_esp_sum", worst_sum),
      report("identity.partial_esp_brute_force", worst_pesp),
      report("identity.frontier_point", worst_front),
      report("identity.odds_normalization", worst_norm),
  };
}

}  // namespace

WorstCase exhaustive_worst_case(int K, int T, long long cap) {
  if (K < 1 || T < 1) throw InvalidArgument("K and T must be positive");
  long long n = 1;
  for (int i = 0; i < T; ++i) {
    n *= K;
    if (n > cap) throw TooLarge("K^T exceeds the enumeration cap");
  }
  Engine root = Engine::create(K, T);
  root.quote_first();
  // One worker per first bet.
  std::vector<WorstCase> parts(K);
  std::vector<std::thread> pool;
  const bool threaded = n >= 4096 && K > 1 && std::thread::hardware_concurrency() > 1;
  for (int k = 0; k < K; ++k) {
    auto job = [&, k] {
      WorstCase& wc = parts[k];
      wc.max = -std::numeric_limits<double>::infinity();
      wc.min = std::numeric_limits<double>::infinity();
      Engine next = root;
      next.observe_and_quote(unit(K, k));
      walk(next, K, k, wc);
    };
    if (threaded) {
      pool.emplace_back(job);
    } else {
      job();
    }
  }
  for (auto& th : pool) th.join();
  WorstCase out = parts[0];
  for (int k = 1; k < K; ++k) {
    out.max = std::max(out.max, parts[k].max);
    out.min = std::min(out.min, parts[k].min);
    out.sequences += parts[k].sequences;
    out.unique_argmax += parts[k].unique_argmax;
    out.last_bet_wins += parts[k].last_bet_wins;
  }
  return out;
}

double grid_minimax_value(int H, const std::vector<double>& s, int n_grid) {
  const int K = static_cast<int>(s.size());
  if (H < 0 || H > 3) throw InvalidArgument("grid oracle supports H <= 3");
  if (K < 1 || K > 3) throw InvalidArgument("grid oracle supports K <= 3");
  if (n_grid < 1) throw InvalidArgument("grid size must be positive");
  const double margin = 1.0 / (2.0 * n_grid);
  const double span = 1.0 - K * margin;
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(n_grid, K, cur, comps);
  std::vector<GridState> inv;
  inv.reserve(comps.size());
  for (const auto& c : comps) {
    GridState g{};
    for (int k = 0; k < K; ++k) g[k] = 1.0 / (margin + span * c[k] / n_grid);
    inv.push_back(g);
  }
  GridState s0{};
  std::copy(s.begin(), s.end(), s0.begin());
  return grid_value(H, s0, K, inv);
}

std::vector<CheckReport> check_frontier(int H, const std::vector<double>& v, double tol) {
  const int K = static_cast<int>(v.size());
  if (K < 1 || H < 1) throw InvalidArgument("frontier check needs K >= 1 and H >= 1");
  const std::string params = hv_params(H, v);
  std::vector<CheckReport> out;

  const DenomEvaluation d = denom_eval_certified(H, v);
  out.push_back({"frontier.denominator_zero", params, std::abs(d.relative), 0.0, tol,
                 std::abs(d.relative) <= tol});

  double worst = 0.0;
  if (K == 1) {
    worst = std::abs(v[0] - H) / H;
  } else {
    std::vector<long double> vl(v.begin(), v.end());
    for (int k = 0; k < K; ++k) {
      const auto sub = without(vl, k);
      const long double den = denom_eval(H, sub);
      const long double pred = den != 0.0L ? H * denom_eval(H - 1, sub) / den
                                           : std::numeric_limits<long double>::infinity();
      worst = std::max(worst, static_cast<double>(std::abs(pred - vl[k]) / std::abs(vl[k])));
    }
  }
  out.push_back({"frontier.elimination", params, worst, 0.0, tol, worst <= tol});

  const double slack = *std::min_element(v.begin(), v.end()) - H;
  const bool lower_ok = K > 1 ? slack > 0.0 : slack >= -tol * H;
  out.push_back({"frontier.lower_bound", params, slack, 0.0, 0.0, lower_ok});

  // Every reduced denominator D_{H,K-|I|}(v\I), I a nonempty proper subset.
  // Beyond 16 outcomes only singletons and their complements are checked.
  long long bad = 0;
  auto check_subset = [&](unsigned long long mask) {
    std::vector<double> rest;
    for (int k = 0; k < K; ++k) {
      if (!(mask >> k & 1ULL)) rest.push_back(v[k]);
    }
    if (denom_eval_certified(H, rest).sign != 1) ++bad;
  };
  if (K <= 16) {
    const unsigned long long full = (1ULL << K) - 1;
    for (unsigned long long mask = 1; mask < full; ++mask) check_subset(mask);
  } else {
    for (int k = 0; k < K; ++k) {
      check_subset(1ULL << k);
      check_subset(~(1ULL << k) & ((1ULL << K) - 1));
    }
  }
  out.push_back({"frontier.reduced_positivity", params, static_cast<double>(bad), 0.0, 0.0,
                 bad == 0});
  return out;
}

std::vector<CheckReport> check_derivatives(int H, const std::vector<double>& v) {
  const int K = static_cast<int>(v.size());
  if (K < 1 || H < 1) throw InvalidArgument("derivative check needs K >= 1 and H >= 1");
  const std::string params = hv_params(H, v);
  using LD = long double;
  const std::vector<LD> vl(v.begin(), v.end());
  const LD whole = denom_eval(H, vl);
  const LD scale = denom_scale(H, vl);
  double first = 0.0, second = 0.0, rec = 0.0;
  for (int k = 0; k < K; ++k) {
    const LD h = 1e-5L * std::max<LD>(1.0L, std::abs(vl[k]));
    auto at = [&](LD dx) {
      std::vector<LD> w = vl;
      w[k] += dx;
      return denom_eval(H, w);
    };
    const LD up = at(h), down = at(-h);
    const auto sub = without(vl, k);
    const LD analytic = denom_eval(H, sub);
    const LD fd = (up - down) / (2 * h);
    const LD dscale = std::max(denom_scale(H, sub), std::abs(analytic));
    first = std::max(first, static_cast<double>(std::abs(fd - analytic) / dscale));
    second = std::max(second, static_cast<double>(std::abs(up - 2 * whole + down) / scale));
    const LD rhs = vl[k] * analytic - H * denom_eval(H - 1, sub);
    rec = std::max(rec, static_cast<double>(std::abs(whole - rhs) / scale));
  }
  return {
      {"derivative.first", params, first, 0.0, 1e-5, first <= 1e-5},
      {"derivative.second_pure", params, second, 0.0, 1e-9, second <= 1e-9},
      {"derivative.recurrence", params, rec, 0.0, 1e-12, rec <= 1e-12},
  };
}

std::vector<CheckReport> identity_suite(int instances, std::uint64_t seed, bool exact) {
  return exact ? identities_in<Rational>(instances, seed) : identities_in<double>(instances, seed);
}

std::vector<CheckReport> frontier_suite(int games, int max_K, int max_T, std::uint64_t seed) {
  if (max_K < 1 || max_T < 2) throw InvalidArgument("frontier suite needs max_K >= 1, max_T >= 2");
  double worst_zero = 0, worst_elim = 0, min_slack = std::numeric_limits<double>::infinity();
  double bad_pos = 0;
  long long rounds = 0;
  bool lower_ok = true;
  for (int g = 0; g < games; ++g) {
    Rng pick(seed + static_cast<std::uint64_t>(g));
    const int K = 1 + static_cast<int>(pick.below(max_K));
    const int T = 2 + static_cast<int>(pick.below(max_T - 1));
    Engine e = Engine::create(K, T);
    Gambler gambler(GamblerSpec::parse("random"), K, seed + static_cast<std::uint64_t>(g));
    OddsVector r = e.quote_first();
    for (int t = 1; t < T; ++t) {
      r = *e.observe_and_quote(gambler.bet(t, r, e.payouts()));
      for (const auto& rep : check_frontier(e.state().horizon(), e.residual_vector())) {
        if (rep.check == "frontier.denominator_zero") worst_zero = std::max(worst_zero, rep.observed);
        if (rep.check == "frontier.elimination") worst_elim = std::max(worst_elim, rep.observed);
        if (rep.check == "frontier.lower_bound") {
          if (K > 1) min_slack = std::min(min_slack, rep.observed);
          lower_ok = lower_ok && rep.pass;
        }
        if (rep.check == "frontier.reduced_positivity") bad_pos += rep.observed;
      }
      ++rounds;
    }
  }
  JsonWriter p;
  p.begin_object().field("games", games).field("max_K", max_K).field("max_T", max_T);
  p.field("seed", seed).field("rounds", static_cast<long long>(rounds)).end_object();
  const std::string params = p.str();
  return {
      {"frontier.denominator_zero", params, worst_zero, 0.0, 1e-6, worst_zero <= 1e-6},
      {"frontier.elimination", params, worst_elim, 0.0, 1e-6, worst_elim <= 1e-6},
      {"frontier.lower_bound", params, min_slack, 0.0, 0.0, lower_ok},
      {"frontier.reduced_positivity", params, bad_pos, 0.0, 0.0, bad_pos == 0},
  };
}

std::vector<CheckReport> exhaustive_suite(int max_K, int max_T, long long cap) {
  std::vector<CheckReport> out;
  for (int K = 1; K <= max_K; ++K) {
    for (int T = 1; T <= max_T; ++T) {
      long long n = 1;
      bool fits = true;
      for (int i = 0; i < T && fits; ++i) fits = (n *= K) <= cap;
      if (!fits) continue;
      const WorstCase wc = exhaustive_worst_case(K, T, cap);
      const double L = optimal_loss(T, K);
      JsonWriter p;
      p.begin_object().field("K", K).field("T", T).field("sequences", wc.sequences).end_object();
      const double dev = std::max(std::abs(wc.max - L), std::abs(wc.min - L));
      out.push_back({"exhaustive.equalization", p.str(), wc.max, L, 1e-6, dev <= 1e-6});
      const double miss = static_cast<double>(wc.unique_argmax - wc.last_bet_wins);
      out.push_back({"exhaustive.last_bet_determines", p.str(), miss, 0.0, 0.0, miss == 0});
    }
  }
  return out;
}

std::vector<CheckReport> epsilon_suite(int games, int K, int T, double eps, std::uint64_t seed) {
  double worst = -std::numeric_limits<double>::infinity();
  const GamblerSpec gambler = GamblerSpec::parse("random");
  for (int g = 0; g < games; ++g) {
    const std::uint64_t sd = seed + static_cast<std::uint64_t>(g);
    const Transcript exact = run_game({K, T, 1.0, EngineMode::exact(), sd}, gambler);
    const Transcript approx = run_game({K, T, 1.0, EngineMode::with_epsilon(eps), sd}, gambler);
    worst = std::max(worst, realized_loss(approx) - realized_loss(exact));
  }
  JsonWriter p;
  p.begin_object().field("games", games).field("K", K).field("T", T).field("epsilon", eps);
  p.field("seed", seed).end_object();
  const double bound = 2.0 * T * eps;
  return {{"epsilon.excess_loss", p.str(), worst, bound, 0.0, worst <= bound}};
}

std::vector<CheckReport> grid_suite(const std::vector<int>& grids) {
  const double target = 2.0 + std::sqrt(2.0);
  // The optimum of the second round is irrational, so the error at a single n
  // jumps with the distance from the nearest grid point. The mean over the
  // window n .. n+31 follows the 1/n rate.
  constexpr int kWindow = 32;
  std::vector<CheckReport> out;
  std::vector<double> means;
  for (int n : grids) {
    const double err = grid_minimax_value(2, {0.0, 0.0}, n) - target;
    double sum = 0.0;
    for (int j = 0; j < kWindow; ++j) sum += grid_minimax_value(2, {0.0, 0.0}, n + j) - target;
    means.push_back(sum / kWindow);
    JsonWriter p;
    p.begin_object().field("H", 2).field("K", 2).field("n_grid", n).end_object();
    const double tol = n >= 400 ? 2e-2 : 1.0;
    out.push_back({"grid.value", p.str(), target + err, target, tol, err >= -1e-12 && err <= tol});
  }
  for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
    if (grids[i + 1] != 2 * grids[i]) continue;
    const double ratio = means[i] / means[i + 1];
    JsonWriter p;
    p.begin_object().field("n_grid", grids[i]).field("n_grid_doubled", grids[i + 1]);
    p.field("window", kWindow).field("mean_error", means[i]).field("mean_error_doubled", means[i + 1]);
    p.end_object();
    out.push_back({"grid.error_halves", p.str(), ratio, 2.0, 0.6, std::abs(ratio - 2.0) <= 0.6});
  }
  return out;
}

}  // namespace bookie
