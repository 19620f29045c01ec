#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arena/autobidder.hpp"
#include "arena/core.hpp"
#include "arena/mechanisms.hpp"

namespace arena {

struct DynamicsOptions {
  int max_rounds = 500;
  /// Sup-norm bid change over a full round that counts as converged. The
  /// round must also leave every advertiser ROS-feasible within
  /// kWelfareTol * max(1, max value).
  double tol = 1e-6;
  /// Chooses which advertiser moves first in every round.
  std::uint64_t seed = 0;
  /// FPA overbid increment as a fraction of the instance's largest value.
  /// Zero overbids by the smallest representable amount.
  double fpa_tick_fraction = 0.0;
  /// Period-2 cycles under FPA halve the tick at most this many times.
  int max_tick_halvings = 5;
  /// Run the deviation scan that fills EquilibriumReport::gamma_achieved.
  bool scan_gamma = true;
};

struct AdvertiserResult {
  double value = 0.0;
  double spend = 0.0;
  double ros_slack = 0.0;
};

struct EquilibriumReport {
  BidProfile bids;
  int iterations = 0;
  bool converged = false;
  double lw_eq = 0.0;
  double lw_opt = 0.0;
  /// lw_opt / lw_eq of the profile the dynamics reached (infinite if lw_eq is 0).
  double poa = 0.0;
  std::vector<AdvertiserResult> per_advertiser;
  /// Smallest gamma for which the final bids pass the deviation scan.
  double gamma_achieved = 0.0;
  bool cycle_detected = false;
  int tick_halvings = 0;
  double final_tick = 0.0;
  /// Bid change over the last completed round.
  double last_change = 0.0;
  std::string diagnostics;
};

/// Round-robin best-response dynamics starting from truthful bids.
EquilibriumReport run_dynamics(const Instance& instance, const MechanismSpec& mechanism,
                               const DynamicsOptions& options = {});

struct Deviation {
  std::size_t advertiser = 0;
  std::vector<double> bids;
  double value = 0.0;
  double current_value = 0.0;
  /// value / current_value; infinite when the current value is zero.
  double value_ratio = 1.0;
  std::string source;
};

struct GammaScan {
  /// Use the exact best-response oracle of the mechanism as a deviation.
  bool best_response = true;
  /// Also scan single-query deviations on a bid grid.
  bool grid = true;
  int grid_points = 400;
  /// Value gains below value_tol * max(1, max value) are ignored.
  double value_tol = kRelativeTol;
  /// ROS slack the input bids may fall below zero by, scaled the same way.
  double slack_tol = kWelfareTol;
  /// A deviation must keep slack >= min(0, current slack) - deviation_slack_tol.
  double deviation_slack_tol = 0.0;
  /// Overbid used by the FPA oracle; 0 is the exact minimal overbid.
  double fpa_tick = 0.0;
};

struct GammaEqCheck {
  double gamma = 0.0;
  bool is_equilibrium = false;
  bool ros_feasible = false;
  /// max over advertisers of (best deviation value / current value) - 1, floored at 0.
  double achieved_gamma = 0.0;
  std::optional<Deviation> best_deviation;
};

GammaEqCheck check_gamma_equilibrium(const Instance& instance, const MechanismSpec& mechanism,
                                     const BidProfile& bids, double gamma, GammaScan scan = {});

double poa_ratio(double lw_opt, double lw_eq);
double poa_of_report(const EquilibriumReport& report);

}  // namespace arena
