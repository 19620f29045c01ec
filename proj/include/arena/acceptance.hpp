#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace arena {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  /// When non-empty, experiment, bound and lower-bound CSVs are written here.
  std::string out_dir;
  int threads = 0;
  /// Ids to run; empty runs all ten.
  std::vector<int> only;
};

/// Runs the acceptance criteria in order. Each result is also printed to
/// `log` (if given) as one PASS/FAIL line as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log);

std::string format_criterion(const CriterionResult& result);

/// Best value of a single rFPA(alpha) advertiser against fixed opponent
/// bids, found by enumerating a log-bid grid of the given step on every
/// query (plus the zero bid) and combining the per-query Pareto frontiers
/// exactly. Supports up to three queries; opponent bids must be positive.
double rfpa_grid_oracle(const std::vector<double>& values, const std::vector<double>& opponent,
                        double target, double alpha, double log_step);

}  // namespace arena
