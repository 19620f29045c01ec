#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "arena/core.hpp"
#include "arena/mechanisms.hpp"

namespace arena {

enum class BoundVariant { kRfpa, kRtruth };

/// First term of the rTruth bound: eta * alpha, or eta times the spend
/// coefficient (alpha - 1/alpha) / (2 ln alpha) of an outright win.
/// rFPA always uses eta * alpha.
enum class CaseOneTerm { kEtaAlpha, kEtaSpend };

std::string to_string(BoundVariant variant);
BoundVariant parse_bound_variant(const std::string& name);
std::string to_string(CaseOneTerm term);
/// "eta_spend" or "eta_alpha".
CaseOneTerm parse_case_one_term(const std::string& name);

/// Weight on gamma in g: (1 + ln beta / ln alpha) / 2.
double bound_m2(double alpha, double beta);
/// Weight on eta in g for each variant.
double bound_s2(BoundVariant variant, double alpha, double beta);

/// Throw Error unless alpha > 1, beta in [1/alpha, alpha], gamma and eta
/// non-negative with gamma + eta = 1.
double g_rfpa(double alpha, double beta, double gamma, double eta);
double g_rtruth(double alpha, double beta, double gamma, double eta);
double g_bound(BoundVariant variant, double alpha, double beta, double gamma, double eta);

struct BoundEvaluation {
  BoundVariant variant = BoundVariant::kRfpa;
  double alpha = 0.0;
  double gamma = 0.0;
  double eta = 1.0;
  /// The first term actually used in f (depends on case1).
  double term_eta_alpha = 0.0;
  double term_gamma = 0.0;
  /// Both rTruth readings of the first term, for reporting.
  double term_eta_alpha_literal = 0.0;
  double term_eta_spend = 0.0;
  CaseOneTerm case1 = CaseOneTerm::kEtaSpend;
  std::vector<std::pair<double, double>> g_curve;
  double g_min = 0.0;
  double beta_at_min = 1.0;
  double f_value = 0.0;
};

struct BoundOptions {
  int beta_points = 4096;
  CaseOneTerm case1 = CaseOneTerm::kEtaSpend;
  /// Golden-section tolerance on ln beta.
  double refine_tol = 1e-8;
  bool keep_curve = true;
};

BoundEvaluation eval_f(double alpha, double gamma, BoundVariant variant, BoundOptions options = {});

struct BoundOptimum {
  double alpha = 0.0;
  double gamma = 0.0;
  double f = 0.0;
  /// 1 / f.
  double poa = 0.0;
  BoundEvaluation evaluation;
};

struct OptimizeOptions {
  double alpha_lo = 1.01;
  double alpha_hi = 4.0;
  int alpha_points = 120;
  double gamma_step = 1e-3;
  int beta_points = 4096;
  CaseOneTerm case1 = CaseOneTerm::kEtaSpend;
};

/// Grid over alpha and gamma, then golden-section refinement of both.
/// alpha_lo == alpha_hi optimizes gamma at a fixed alpha.
BoundOptimum optimize_f(BoundVariant variant, OptimizeOptions options = {});

/// 1 + 2 ln alpha / (alpha - 1/alpha).
double rtruth_lb_ratio(double alpha);

struct LowerBoundInstance {
  Instance instance;
  BidProfile bids;
  MechanismSpec mechanism;
  double gamma = 0.0;
  double predicted_ratio = 1.0;
  /// (name, value) pairs: B1, B2, epsilon or alpha, epsilon, s.
  std::vector<std::pair<std::string, double>> params;
};

/// Two queries, two advertisers, rTruth(alpha); an equilibrium whose
/// welfare ratio tends to rtruth_lb_ratio(alpha) as epsilon -> 0.
LowerBoundInstance make_rtruth_lb_instance(double alpha, double epsilon);

/// Two-query instance for a deterministic rule (FPA or SPA) with ratio
/// approaching 2 as B2 grows and epsilon shrinks.
LowerBoundInstance make_det_lb_instance(MechanismKind mechanism, double b1, double b2,
                                        double epsilon, double gamma);

/// CSV with columns alpha,gamma,beta,g,term_eta_alpha,term_gamma,f; one row
/// per g_curve sample.
void write_bound_curve_csv(std::ostream& out, const std::vector<BoundEvaluation>& evaluations);

}  // namespace arena
