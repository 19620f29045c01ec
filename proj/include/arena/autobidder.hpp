#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arena/core.hpp"
#include "arena/mechanisms.hpp"

namespace arena {

class NumericError : public Error {
 public:
  using Error::Error;
};

enum class BestResponseMethod {
  kUniformMultiplier,
  kDualDecomposition,
  kKnapsackExact,
  kKnapsackDp,
  kKnapsackGreedy,
  kGridOracle,
};

std::string to_string(BestResponseMethod method);

/// A single advertiser's bids against fixed opponents, with the resulting
/// expected value and spend evaluated through the mechanism.
struct BestResponse {
  std::vector<double> bids;
  double value = 0.0;
  double spend = 0.0;
  BestResponseMethod method = BestResponseMethod::kUniformMultiplier;
  /// Uniform multiplier c, or the dual multiplier lambda for rFPA.
  double multiplier = 0.0;
  /// True when the subset selection fell back to the greedy heuristic.
  bool heuristic = false;
};

/// Which subset solver the knapsack-style responses use.
enum class SubsetSolver { kAuto, kExact, kDp, kGreedy };

/// Best uniform multiplier c >= 1 for a truthful rule (SPA or rTruth): c = 1
/// when truthful bidding already attains the best feasible value, otherwise
/// the largest ROS-feasible multiplier. Throws Error for non-truthful mechanisms.
BestResponse uniform_best_response(const Instance& instance, std::size_t advertiser,
                                   const BidProfile& profile, const MechanismSpec& mechanism);

/// rFPA(alpha) best response by Lagrangian decomposition over the single
/// ROS constraint. Requires two advertisers and alpha > 1.
BestResponse rfpa_best_response(const Instance& instance, std::size_t advertiser,
                                const BidProfile& profile, double alpha);

/// First-price best response: choose the set of queries to win at the price
/// (top opponent bid + tick). Queries not won get the highest bid that
/// would still lose, capped by what the advertiser could afford to pay for
/// that query alone.
BestResponse fpa_best_response(const Instance& instance, std::size_t advertiser,
                               const BidProfile& profile, double tick,
                               SubsetSolver solver = SubsetSolver::kAuto);

/// Exact best response under SPA: a knapsack over queries priced at the top
/// opponent bid. Uniform bidding is only optimal up to the last item here.
BestResponse spa_knapsack_best_response(const Instance& instance, std::size_t advertiser,
                                        const BidProfile& profile,
                                        SubsetSolver solver = SubsetSolver::kAuto);

/// Response used by the dynamics: uniform for SPA/rTruth, dual decomposition
/// for rFPA, knapsack for FPA.
BestResponse dynamics_best_response(const Instance& instance, std::size_t advertiser,
                                    const BidProfile& profile, const MechanismSpec& mechanism,
                                    double fpa_tick);

/// Strongest deviation oracle available for each mechanism.
BestResponse exact_best_response(const Instance& instance, std::size_t advertiser,
                                 const BidProfile& profile, const MechanismSpec& mechanism,
                                 double fpa_tick);

struct UndominatedViolation {
  std::size_t advertiser = 0;
  std::size_t query = 0;
  double current_bid = 0.0;
  double better_bid = 0.0;
  double value_gain = 0.0;
};

struct UndominatedGrid {
  int points = 400;
  /// Minimum value increase that counts as a violation.
  double value_tol = 1e-7;
  /// ROS slack the input bids may fall below zero by.
  double slack_tol = 1e-9;
  /// A deviation counts only if its slack is at least min(0, current slack)
  /// minus this amount. Zero keeps knife-edge overpayments from registering.
  double deviation_slack_tol = 0.0;
};

struct UndominatedReport {
  bool ok = true;
  std::vector<UndominatedViolation> violations;
  UndominatedGrid grid;
};

/// Single-query deviation scan. Certifies undominated bids only up to the
/// grid resolution. Throws OraclePrecondition when the input bids violate ROS.
UndominatedReport check_undominated(const Instance& instance, const BidProfile& profile,
                                    const MechanismSpec& mechanism, UndominatedGrid grid = {});

enum class LemmaCondition {
  /// Wins outright while bidding below alpha times the other's value.
  kOutrightWinBelowAlphaValue,
  /// Shares the query while bidding below v / (1 + ln alpha + ln beta).
  kSharedBidBelowDefectionBound,
};

struct LemmaFlag {
  std::size_t query = 0;
  std::size_t advertiser = 0;
  LemmaCondition condition = LemmaCondition::kOutrightWinBelowAlphaValue;
  double bid = 0.0;
  double bound = 0.0;
};

struct LemmaReport {
  bool ok = true;
  std::vector<LemmaFlag> flags;
};

/// Necessary conditions for undominated rFPA(alpha) bids with two advertisers.
/// A bid within tol of alpha times the other bid counts as an outright win.
LemmaReport check_lemma_conditions(const Instance& instance, const BidProfile& profile,
                                   double alpha, double tol = 1e-6);

}  // namespace arena
