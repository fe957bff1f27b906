#pragma once

// Odds engine: minimal worst-case loss from whatever state the game is in.

#include "bookie/loss_poly.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bookie {

using OddsVector = std::vector<double>;

inline constexpr double kDecisiveTol = 1e-9;
inline constexpr double kBetSumTol = 1e-9;
inline constexpr int kMixtureMaxRound = 20;

struct EngineMode {
  enum class Kind { exact, epsilon };
  Kind kind = Kind::exact;
  double epsilon = 0.0;

  static EngineMode exact() { return {}; }
  static EngineMode with_epsilon(double eps);
  /// The default epsilon 1/T.
  static EngineMode default_epsilon(int T) { return with_epsilon(1.0 / T); }

  bool is_exact() const { return kind == Kind::exact; }
  std::string name() const { return is_exact() ? "exact" : "epsilon"; }
  friend bool operator==(const EngineMode&, const EngineMode&) = default;
};

struct EngineState {
  int K = 0;
  int T = 0;
  int t = 1;                  // round whose odds are quoted next or currently
  std::vector<double> s;      // state vector the loss is computed from
  double L = 0.0;             // water level
  EngineMode mode;
  std::optional<OddsVector> last_odds;
  bool done = false;

  /// Rounds left including round t.
  int horizon() const { return T - t + 1; }
};

/// Checks a bet for K outcomes: finite, nonnegative, summing to 1 within
/// kBetSumTol. Returns the bet rescaled to sum exactly to 1. Throws InvalidBet.
std::vector<double> validate_bet(std::span<const double> q, std::size_t K);

/// max_k q(k) >= 1 - kDecisiveTol.
bool is_decisive(std::span<const double> q);

/// Odds r(k) proportional to D_{H,K-1}(v without k), normalized. H is the
/// number of rounds after the one being quoted. Requires v on or above the
/// frontier, where every numerator is positive.
OddsVector optimal_odds(int H, std::span<const double> v);

/// Published payout odds 1 / (gamma r(k)).
std::vector<double> apply_overround(std::span<const double> r, double gamma);

/// Upper end of a certified bracket of width below eps around the largest
/// root of Q_{H,s}; +infinity when no root can be isolated.
double epsilon_oracle(int H, std::span<const double> s, double eps);

class Engine {
 public:
  /// Fresh game: s = 0 (eps 1 in epsilon mode), L = L*_{T,K}.
  static Engine create(int K, int T, EngineMode mode = EngineMode::exact(),
                       double tol = kDefaultRootTol);
  /// Game continued from committed payouts s with H rounds left.
  static Engine resume(int H, std::vector<double> s, EngineMode mode = EngineMode::exact(),
                       double tol = kDefaultRootTol);

  /// Odds for the first round (uniform on a fresh game). Throws OutOfOrder.
  OddsVector quote_first();

  /// Records the bet on the quoted round. Returns the next odds, or nothing
  /// after the final round. Throws GameOver, OutOfOrder, InvalidBet.
  std::optional<OddsVector> observe_and_quote(std::span<const double> q);

  /// v = L 1 - s.
  std::vector<double> residual_vector() const;

  const EngineState& state() const { return st_; }

  /// Payouts owed per outcome, sum_t q_t(k) / r_t(k). Equals s in exact mode.
  const std::vector<double>& payouts() const { return paid_; }

 private:
  Engine() = default;
  double solve_loss(int H) const;
  OddsVector quote_current() const;

  EngineState st_;
  std::vector<double> paid_;
  double tol_ = kDefaultRootTol;
  bool fresh_ = true;
};

/// Prior-art K = 2 baseline: the expectation of the decisive-gambler odds
/// over Bernoulli(q_i(1)) histories. `history` holds q_1(1)..q_{t-1}(1).
/// Throws InvalidArgument for K != 2 and TooLarge beyond round kMixtureMaxRound.
OddsVector odg_mixture_quote(std::span<const double> history, int T, int K = 2);

}  // namespace bookie
