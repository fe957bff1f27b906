#pragma once

// Gambler strategies, the game loop, and payout accounting.

#include "bookie/engine.hpp"
#include "bookie/transcript.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bookie {

/// xorshift64* seeded through splitmix64; stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t x_;
};

enum class GamblerKind {
  decisive_fixed,         // always the same outcome
  decisive_seeded,        // a uniformly random outcome each round
  decisive_last_max,      // the outcome with the largest payout so far
  uniform,                // 1/K on every outcome
  proportional_to_state,  // q proportional to payouts + 1
  scripted,               // a fixed list of bets
  random,                 // decisive or a flat Dirichlet split, half the time each
};

struct GamblerSpec {
  GamblerKind kind = GamblerKind::uniform;
  int outcome = 0;                          // decisive_fixed, 0-based
  std::vector<std::vector<double>> script;  // scripted

  bool decisive() const;
  std::string name() const;
  /// Accepts the names printed by name(), with '-' or '_' separators.
  static GamblerSpec parse(std::string_view name, int outcome = 0);
};

class Gambler {
 public:
  Gambler(GamblerSpec spec, int K, std::uint64_t seed);
  /// Bet for round t (1-based) given the quoted odds and the payouts owed so far.
  std::vector<double> bet(int t, const OddsVector& r, const std::vector<double>& payouts);

 private:
  GamblerSpec spec_;
  int K_;
  Rng rng_;
};

struct GameConfig {
  int K = 2;
  int T = 1;
  double gamma = 1.0;
  EngineMode mode = EngineMode::exact();
  std::uint64_t seed = 0;
};

struct Transcript {
  GameConfig config;
  std::string gambler;
  std::vector<RoundRecord> rounds;
  std::vector<double> payouts;
};

Transcript run_game(const GameConfig& config, const GamblerSpec& gambler);

/// max_k payouts(k).
double realized_loss(const Transcript& tr);

/// T - realized_loss / gamma.
double bookmaker_profit(const Transcript& tr);

/// sum_t q_t(k) / r_t(k) from the round records.
std::vector<double> recompute_payouts(const Transcript& tr);

struct BatchRow {
  std::uint64_t seed = 0;
  std::string kind;
  double realized_loss = 0.0;
  double profit = 0.0;
};

/// Games with seeds config.seed, config.seed + 1, ... spread over worker threads.
std::vector<BatchRow> run_batch(const GameConfig& config, const GamblerSpec& gambler, int games,
                                unsigned threads = 0);

/// "seed,kind,realized_loss,profit" header plus one row per game.
std::string batch_csv(const std::vector<BatchRow>& rows);

}  // namespace bookie
