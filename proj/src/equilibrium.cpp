#include "arena/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arena {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fpa_tick_for(const Instance& instance, double fraction) {
  const double scale = instance.max_value() > 0.0 ? instance.max_value() : 1.0;
  return fraction * scale;
}

bool ros_feasible_within(const Instance& instance, const BidProfile& bids,
                        const MechanismSpec& mech, double slack_tol) {
  const ProfileOutcome out = evaluate_profile(instance, bids, mech);
  for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
    if (instance.target(i) * out.value[i] - out.spend[i] < -slack_tol) return false;
  }
  return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  }
  return d;
}

int direction(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

/// True when every entry moved the same way (or stayed within eps) in both rounds.
bool same_direction(const Matrix& a, const Matrix& b, double eps) {
  bool moved = false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const int x = direction(a(i, j), eps);
      if (x != direction(b(i, j), eps)) return false;
      moved = moved || x != 0;
    }
  }
  return moved;
}

}  // namespace

double poa_ratio(double lw_opt, double lw_eq) {
  if (lw_eq <= 0.0) return kInf;
  return lw_opt / lw_eq;
}

double poa_of_report(const EquilibriumReport& report) {
  return poa_ratio(report.lw_opt, report.lw_eq);
}

EquilibriumReport run_dynamics(const Instance& instance, const MechanismSpec& mechanism,
                               const DynamicsOptions& options) {
  const MechanismSpec mech = mechanism.effective();
  mech.validate(instance.num_advertisers());
  if (options.max_rounds < 1) throw Error("max_rounds must be at least 1");

  const std::size_t n = instance.num_advertisers();
  const std::size_t first = static_cast<std::size_t>(options.seed % n);
  double tick = fpa_tick_for(instance, options.fpa_tick_fraction);
  const double slack_tol = kWelfareTol * std::max(1.0, instance.max_value());

  EquilibriumReport report;
  BidProfile profile = BidProfile::truthful(instance);
  std::vector<BidProfile> recent;  // end-of-round profiles, newest last
  const bool fpa = mech.kind == MechanismKind::kFpa;
  // FPA price wars move every contested bid up by a tick per move. While a
  // round repeats the previous round's direction of change, the overbid
  // grows geometrically; it falls back to base_tick once the war ends.
  double base_tick = tick;
  const double min_escalation = 1e-9 * fpa_tick_for(instance, 1.0);
  const double max_escalation = 1e-2 * fpa_tick_for(instance, 1.0);
  Matrix last_delta;
  ProfileOutcome last_outcome = evaluate_profile(instance, profile, mech);

  for (int round = 1; round <= options.max_rounds; ++round) {
    const BidProfile start = profile;
    // Sub-tolerance bid moves can still hand queries back and forth, so the
    // allocation is compared after every single move.
    double allocation_change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (first + k) % n;
      const BestResponse br = dynamics_best_response(instance, i, profile, mech, tick);
      profile.set_row(i, br.bids);
      ProfileOutcome outcome = evaluate_profile(instance, profile, mech);
      allocation_change =
          std::max(allocation_change, max_abs_diff(outcome.allocation, last_outcome.allocation));
      last_outcome = std::move(outcome);
    }
    report.iterations = round;
    report.last_change = profile.max_abs_diff(start);
    if (report.last_change <= options.tol && allocation_change <= options.tol &&
        tick == base_tick && ros_feasible_within(instance, profile, mech, slack_tol)) {
      report.converged = true;
      break;
    }
    if (fpa) {
      Matrix delta = profile.bids();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < instance.num_queries(); ++j) delta(i, j) -= start.bid(i, j);
      }
      const bool drifting = allocation_change > options.tol && last_delta.rows() == n &&
                            same_direction(delta, last_delta, 1e-3 * base_tick);
      if (drifting) {
        tick = std::max(base_tick, std::min(std::max(2.0 * tick, min_escalation), max_escalation));
      } else if (tick > base_tick) {
        tick = 0.5 * tick < std::max(base_tick, min_escalation) ? base_tick : 0.5 * tick;
      }
      last_delta = std::move(delta);
    }
    // A period-2 cycle returns to the profile of two rounds ago while each
    // round still moves the bids by more than tol.
    if (recent.size() >= 2 && report.last_change > options.tol &&
        profile.max_abs_diff(recent[recent.size() - 2]) <=
            std::min(options.tol, 0.01 * report.last_change)) {
      if (fpa && base_tick > 0.0 && report.tick_halvings < options.max_tick_halvings) {
        base_tick *= 0.5;
        tick = base_tick;
        ++report.tick_halvings;
        recent.clear();
        continue;
      }
      report.cycle_detected = true;
      report.diagnostics = "period-2 cycle after " + std::to_string(round) +
                           " rounds; bid change per round " + format_double(report.last_change);
      break;
    }
    recent.push_back(profile);
    if (recent.size() > 2) recent.erase(recent.begin());
  }
  if (!report.converged && report.diagnostics.empty()) {
    report.diagnostics = "no convergence within " + std::to_string(options.max_rounds) +
                         " rounds; last bid change " + format_double(report.last_change);
  }
  report.final_tick = tick;

  const ProfileOutcome outcome = evaluate_profile(instance, profile, mech);
  const std::vector<double> slack = ros_slack(instance, outcome.value, outcome.spend);
  for (std::size_t i = 0; i < n; ++i) {
    report.per_advertiser.push_back({outcome.value[i], outcome.spend[i], slack[i]});
  }
  report.lw_eq = liquid_welfare(instance, outcome.allocation);
  report.lw_opt = optimal_welfare(instance).welfare;
  report.poa = poa_ratio(report.lw_opt, report.lw_eq);
  report.bids = std::move(profile);

  if (options.scan_gamma) {
    GammaScan scan;
    scan.fpa_tick = tick;
    const GammaEqCheck check = check_gamma_equilibrium(instance, mech, report.bids, 0.0, scan);
    report.gamma_achieved = check.ros_feasible ? check.achieved_gamma : kInf;
  }
  return report;
}

GammaEqCheck check_gamma_equilibrium(const Instance& instance, const MechanismSpec& mechanism,
                                     const BidProfile& bids, double gamma, GammaScan scan) {
  if (!(gamma >= 0.0)) throw Error("gamma must be non-negative");
  const MechanismSpec mech = mechanism.effective();
  mech.validate(instance.num_advertisers());
  const double scale = std::max(1.0, instance.max_value());
  const double value_tol = scan.value_tol * scale;
  const double slack_tol = scan.slack_tol * scale;
  const double tick = scan.fpa_tick;

  const ProfileOutcome base = evaluate_profile(instance, bids, mech);
  GammaEqCheck check;
  check.gamma = gamma;
  check.ros_feasible = true;
  for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
    if (instance.target(i) * base.value[i] - base.spend[i] < -slack_tol) check.ros_feasible = false;
  }
  if (!check.ros_feasible) {
    check.is_equilibrium = false;
    check.achieved_gamma = kInf;
    return check;
  }

  double worst_ratio = 1.0;
  auto consider = [&](std::size_t i, std::vector<double> dev_bids, double value, std::string source) {
    const double current = base.value[i];
    if (value <= current + value_tol) return;
    const double ratio = current > value_tol ? value / current : kInf;
    if (!check.best_deviation || ratio > check.best_deviation->value_ratio) {
      check.best_deviation = Deviation{i, std::move(dev_bids), value, current, ratio, std::move(source)};
    }
    worst_ratio = std::max(worst_ratio, ratio);
    if (value > (1.0 + gamma) * current + value_tol) check.is_equilibrium = false;
  };

  check.is_equilibrium = true;
  if (scan.best_response) {
    for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
      const BestResponse br = exact_best_response(instance, i, bids, mech, tick);
      const double floor = std::min(0.0, instance.target(i) * base.value[i] - base.spend[i]) -
                           scan.deviation_slack_tol * scale;
      if (instance.target(i) * br.value - br.spend < floor) continue;
      consider(i, br.bids, br.value, to_string(br.method));
    }
  }
  if (scan.grid) {
    UndominatedGrid grid{scan.grid_points, value_tol, slack_tol, scan.deviation_slack_tol * scale};
    const UndominatedReport single = check_undominated(instance, bids, mech, grid);
    for (const UndominatedViolation& v : single.violations) {
      std::vector<double> dev(bids.row(v.advertiser).begin(), bids.row(v.advertiser).end());
      dev[v.query] = v.better_bid;
      consider(v.advertiser, std::move(dev), base.value[v.advertiser] + v.value_gain,
               "single-query grid");
    }
  }
  check.achieved_gamma = worst_ratio - 1.0;
  return check;
}

}  // namespace arena
