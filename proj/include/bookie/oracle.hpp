#pragma once

// Brute-force oracles for the closed-form theory and the engine.

#include "bookie/engine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bookie {

/// One verification result, emitted as
/// {"check":..,"params":{..},"observed":..,"expected":..,"tol":..,"pass":..}.
struct CheckReport {
  std::string check;
  std::string params;  // rendered JSON object
  double observed = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  bool pass = true;

  std::string to_json() const;
};

bool all_pass(const std::vector<CheckReport>& reports);

struct WorstCase {
  double max = 0.0;
  double min = 0.0;
  long long sequences = 0;
  long long unique_argmax = 0;  // sequences whose payout argmax is unique
  long long last_bet_wins = 0;  // of those, argmax == final bet
};

/// Plays every decisive sequence on a fresh exact engine. Throws TooLarge when
/// K^T exceeds `cap`.
WorstCase exhaustive_worst_case(int K, int T, long long cap = 10'000'000);

/// Recursive min over interior simplex grid points r of max over decisive
/// bets; V_0(s) = max_k s(k). The grid is r = m 1 + (1 - K m) c / n with
/// m = 1 / (2n) and c running over compositions of n into K parts.
double grid_minimax_value(int H, const std::vector<double>& s, int n_grid);

/// Necessary conditions on an H-achievable residual vector: D_{H,K}(v) = 0,
/// the elimination formula, v > H 1, and positive reduced denominators.
std::vector<CheckReport> check_frontier(int H, const std::vector<double>& v, double tol = 1e-6);

/// Finite-difference partial derivatives of D_{H,K} against D_{H,K-1}(v\k),
/// zero pure second derivatives, and the recurrence in each coordinate.
std::vector<CheckReport> check_derivatives(int H, const std::vector<double>& v);

/// Randomized identity fuzz; `exact` switches to big rationals.
std::vector<CheckReport> identity_suite(int instances, std::uint64_t seed, bool exact);

/// Frontier checks after every non-final round of seeded random games.
std::vector<CheckReport> frontier_suite(int games, int max_K, int max_T, std::uint64_t seed);

/// max = min = optimal loss for every (K, T) with K <= max_K, T <= max_T,
/// K^T <= cap.
std::vector<CheckReport> exhaustive_suite(int max_K, int max_T, long long cap = 100'000);

/// Epsilon-mode loss against exact-mode loss on the same random bets.
std::vector<CheckReport> epsilon_suite(int games, int K, int T, double eps, std::uint64_t seed);

/// Grid-minimax convergence towards 2 + sqrt(2) for K = 2, H = 2.
std::vector<CheckReport> grid_suite(const std::vector<int>& grids);

}  // namespace bookie
