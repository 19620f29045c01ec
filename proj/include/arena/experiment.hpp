#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "arena/bounds.hpp"
#include "arena/core.hpp"
#include "arena/equilibrium.hpp"
#include "arena/mechanisms.hpp"

namespace arena {

enum class Setup { kA, kB, kC, kD, kFile };

std::string to_string(Setup setup);
/// "a".."d" or "file".
Setup parse_setup(const std::string& name);

/// Instances are drawn from std::mt19937_64. Trial t of stream s gets its
/// own generator seeded with splitmix64(splitmix64(splitmix64(seed) ^ s) + t),
/// so different seeds do not share trials. A double is (x >> 11) * 2^-53.
using Rng = std::mt19937_64;
std::uint64_t splitmix64(std::uint64_t x);
Rng trial_rng(std::uint64_t seed, int trial, std::uint64_t stream = 0);
double uniform(Rng& rng, double lo, double hi);

/// (a) two advertisers, values U[0.3, 1]; (b) each advertiser flips a fair
/// coin between U[1, 1.2] and U[0.3, 0.5] for all its values; (c) and (d)
/// are fixed. `queries` only applies to a and b.
Instance gen_instance(Setup setup, int queries, Rng& rng);

/// "lo:hi:step" inclusive of hi (up to rounding), or a comma list.
std::vector<double> parse_alpha_range(const std::string& text);
/// 1.05, 1.10, ..., 2.00.
std::vector<double> default_alphas();

struct ExperimentConfig {
  Setup setup = Setup::kA;
  std::string instance_file;
  /// Randomized mechanisms run once per alpha; SPA and FPA run once with alpha 1.
  std::vector<MechanismKind> mechanisms = {MechanismKind::kSpa, MechanismKind::kRfpa,
                                           MechanismKind::kRtruth};
  std::vector<double> alphas = default_alphas();
  int trials = 20;
  std::uint64_t seed = 0;
  int queries = 50;
  DynamicsOptions dynamics;
  /// 0 reads ARENA_THREADS, falling back to the hardware concurrency.
  int threads = 0;
};

struct ExperimentRow {
  int trial = 0;
  std::string setup;
  std::string mechanism;
  double alpha = 1.0;
  bool converged = false;
  int iterations = 0;
  double lw_eq = 0.0;
  double lw_opt = 0.0;
  double poa = 0.0;
  double gamma_achieved = 0.0;
};

struct SummaryRow {
  std::string setup;
  std::string mechanism;
  double alpha = 1.0;
  int trials = 0;
  int converged = 0;
  int not_converged = 0;
  /// Mean over converged trials; NaN when none converged.
  double mean_poa = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
/// Looks up one summary row; throws Error if absent.
const SummaryRow& find_summary(const ExperimentResult& result, MechanismKind kind, double alpha = 1.0);

int worker_count(int requested);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct BoundsRun {
  std::vector<BoundEvaluation> curves;
  BoundOptimum optimum;
};

/// Evaluates f at each alpha (gamma < 0 optimizes gamma per alpha), plus
/// the optimum over the alpha range.
BoundsRun run_bounds(BoundVariant variant, const std::vector<double>& alphas, double gamma,
                     CaseOneTerm case1 = CaseOneTerm::kEtaSpend);
/// alpha,gamma,f,poa,term_eta_alpha,term_eta_alpha_literal,term_eta_spend,term_gamma,g_min,beta_at_min
void write_bound_sweep_csv(std::ostream& out, const std::vector<BoundEvaluation>& curves);

struct LowerBoundRow {
  std::string kind;
  double alpha = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  double predicted_ratio = 0.0;
  double measured_ratio = 0.0;
  bool equilibrium = false;
  double achieved_gamma = 0.0;
};

/// Builds the instance, measures lw_opt / lw_eq, and runs the gamma check.
LowerBoundRow verify_lower_bound(const LowerBoundInstance& lb, const std::string& kind);
void write_lower_bound_csv(std::ostream& out, const std::vector<LowerBoundRow>& rows);

}  // namespace arena
