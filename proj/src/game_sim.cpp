#include "bookie/game_sim.hpp"

#include "bookie/json_out.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bookie {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> unit(int K, int k) {
  std::vector<double> e(K, 0.0);
  e[k] = 1.0;
  return e;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  x_ = splitmix64(s);
  if (x_ == 0) x_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::next() {
  x_ ^= x_ >> 12;
  x_ ^= x_ << 25;
  x_ ^= x_ >> 27;
  return x_ * 0x2545F4914F6CDD1DULL;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

bool GamblerSpec::decisive() const {
  switch (kind) {
    case GamblerKind::decisive_fixed:
    case GamblerKind::decisive_seeded:
    case GamblerKind::decisive_last_max:
      return true;
    default:
      return false;
  }
}

std::string GamblerSpec::name() const {
  switch (kind) {
    case GamblerKind::decisive_fixed: return "decisive-fixed";
    case GamblerKind::decisive_seeded: return "decisive-seeded";
    case GamblerKind::decisive_last_max: return "decisive-last-max";
    case GamblerKind::uniform: return "uniform";
    case GamblerKind::proportional_to_state: return "proportional-to-state";
    case GamblerKind::scripted: return "scripted";
    case GamblerKind::random: return "random";
  }
  return "unknown";
}

GamblerSpec GamblerSpec::parse(std::string_view name, int outcome) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '_', '-');
  GamblerSpec g;
  g.outcome = outcome;
  if (n == "decisive-fixed") {
    g.kind = GamblerKind::decisive_fixed;
  } else if (n == "decisive-seeded") {
    g.kind = GamblerKind::decisive_seeded;
  } else if (n == "decisive-last-max") {
    g.kind = GamblerKind::decisive_last_max;
  } else if (n == "uniform") {
    g.kind = GamblerKind::uniform;
  } else if (n == "proportional-to-state") {
    g.kind = GamblerKind::proportional_to_state;
  } else if (n == "scripted") {
    g.kind = GamblerKind::scripted;
  } else if (n == "random") {
    g.kind = GamblerKind::random;
  } else {
    throw InvalidArgument("unknown gambler '" + std::string(name) + "'");
  }
  return g;
}

Gambler::Gambler(GamblerSpec spec, int K, std::uint64_t seed)
    : spec_(std::move(spec)), K_(K), rng_(seed) {
  if (spec_.kind == GamblerKind::decisive_fixed && (spec_.outcome < 0 || spec_.outcome >= K)) {
    throw InvalidArgument("decisive outcome out of range");
  }
}

std::vector<double> Gambler::bet(int t, const OddsVector& /*r*/, const std::vector<double>& payouts) {
  switch (spec_.kind) {
    case GamblerKind::decisive_fixed:
      return unit(K_, spec_.outcome);
    case GamblerKind::decisive_seeded:
      return unit(K_, static_cast<int>(rng_.below(K_)));
    case GamblerKind::decisive_last_max: {
      const auto it = std::max_element(payouts.begin(), payouts.end());
      return unit(K_, static_cast<int>(it - payouts.begin()));
    }
    case GamblerKind::uniform:
      return std::vector<double>(K_, 1.0 / K_);
    case GamblerKind::proportional_to_state: {
      std::vector<double> q(K_);
      double sum = 0.0;
      for (int k = 0; k < K_; ++k) sum += (q[k] = payouts[k] + 1.0);
      for (double& x : q) x /= sum;
      return q;
    }
    case GamblerKind::scripted: {
      if (t < 1 || t > static_cast<int>(spec_.script.size())) {
        throw InvalidArgument("script has no bet for round " + std::to_string(t));
      }
      return spec_.script[t - 1];
    }
    case GamblerKind::random: {
      if (rng_.uniform() < 0.5) return unit(K_, static_cast<int>(rng_.below(K_)));
      std::vector<double> q(K_);
      double sum = 0.0;
      for (double& x : q) sum += (x = -std::log1p(-rng_.uniform()));
      if (!(sum > 0.0)) return std::vector<double>(K_, 1.0 / K_);
      for (double& x : q) x /= sum;
      return q;
    }
  }
  throw InvalidArgument("unknown gambler kind");
}

Transcript run_game(const GameConfig& config, const GamblerSpec& spec) {
  if (!(config.gamma >= 1.0)) throw InvalidArgument("gamma must be >= 1");
  Transcript tr;
  tr.config = config;
  tr.gambler = spec.name();
  Engine e = Engine::create(config.K, config.T, config.mode);
  Gambler g(spec, config.K, config.seed);
  OddsVector r = e.quote_first();
  for (int t = 1; t <= config.T; ++t) {
    const std::vector<double> q = validate_bet(g.bet(t, r, e.payouts()), config.K);
    const std::optional<OddsVector> next = e.observe_and_quote(q);
    tr.rounds.push_back(make_round_record(e, r, q));
    if (next) r = *next;
  }
  tr.payouts = e.payouts();
  return tr;
}

double realized_loss(const Transcript& tr) {
  if (tr.payouts.empty()) return 0.0;
  return *std::max_element(tr.payouts.begin(), tr.payouts.end());
}

double bookmaker_profit(const Transcript& tr) {
  return tr.config.T - realized_loss(tr) / tr.config.gamma;
}

std::vector<double> recompute_payouts(const Transcript& tr) {
  std::vector<double> p(tr.config.K, 0.0);
  for (const auto& rec : tr.rounds) {
    for (int k = 0; k < tr.config.K; ++k) p[k] += rec.q[k] / rec.r[k];
  }
  return p;
}

std::vector<BatchRow> run_batch(const GameConfig& config, const GamblerSpec& gambler, int games,
                                unsigned threads) {
  if (games < 0) throw InvalidArgument("game count must be nonnegative");
  std::vector<BatchRow> rows(games);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max(1, games));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i = next++; i < games; i = next++) {
      try {
        GameConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(i);
        const Transcript tr = run_game(c, gambler);
        rows[i] = {c.seed, tr.gambler, realized_loss(tr), bookmaker_profit(tr)};
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::string out = "seed,kind,realized_loss,profit\n";
  for (const auto& row : rows) {
    out += std::to_string(row.seed) + ',' + row.kind + ',' + format_real(row.realized_loss) + ',' +
           format_real(row.profit) + '\n';
  }
  return out;
}

}  // namespace bookie
