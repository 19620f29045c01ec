#include "arena/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

namespace arena {

namespace {

constexpr double kGoldenInv = 0.6180339887498949;  // (sqrt(5) - 1) / 2

void require_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw Error("alpha must be > 1");
}

void require_beta(double alpha, double beta) {
  const double slack = 1e-12;
  if (!(beta >= (1.0 - slack) / alpha && beta <= alpha * (1.0 + slack))) {
    throw Error("beta must lie in [1/alpha, alpha]");
  }
}

void require_weights(double gamma, double eta) {
  if (!(gamma >= 0.0) || !(eta >= 0.0) || std::abs(gamma + eta - 1.0) > 1e-12) {
    throw Error("gamma and eta must be non-negative and sum to 1");
  }
}

/// Minimizes f on [lo, hi] assuming one interior minimum.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double c = b - kGoldenInv * (b - a);
  double d = a + kGoldenInv * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenInv * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenInv * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  return golden_min([&](double x) { return -f(x); }, lo, hi, tol);
}

double case_one_coefficient(BoundVariant variant, double alpha, CaseOneTerm term) {
  if (variant == BoundVariant::kRfpa || term == CaseOneTerm::kEtaAlpha) return alpha;
  return (alpha - 1.0 / alpha) / (2.0 * std::log(alpha));
}

/// Log-spaced beta grid over [1/alpha, alpha] with exact endpoints.
std::vector<double> beta_grid(double alpha, int points) {
  const double la = std::log(alpha);
  std::vector<double> betas(points);
  for (int k = 0; k < points; ++k) {
    betas[k] = std::exp(-la + 2.0 * la * k / (points - 1));
  }
  betas.front() = 1.0 / alpha;
  betas.back() = alpha;
  return betas;
}

/// m2 and s2 sampled on one beta grid; g = gamma * m + eta * s.
struct Coefficients {
  std::vector<double> m;
  std::vector<double> s;
};

Coefficients sample(BoundVariant variant, double alpha, int points) {
  Coefficients c;
  for (double beta : beta_grid(alpha, points)) {
    c.m.push_back(bound_m2(alpha, beta));
    c.s.push_back(bound_s2(variant, alpha, beta));
  }
  return c;
}

double grid_f(const Coefficients& c, double k, double gamma) {
  const double eta = 1.0 - gamma;
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.m.size(); ++i) g = std::min(g, gamma * c.m[i] + eta * c.s[i]);
  return std::min({eta * k, gamma, g});
}

/// Best gamma for one alpha: grid of the given step, then golden section
/// (f is a minimum of affine functions of gamma, hence concave).
std::pair<double, double> best_gamma(const Coefficients& c, double k, double step) {
  const int n = static_cast<int>(std::ceil(1.0 / step));
  double best_g = 0.0;
  double best_f = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double gamma = std::min(1.0, i * step);
    const double f = grid_f(c, k, gamma);
    if (f > best_f) {
      best_f = f;
      best_g = gamma;
    }
  }
  const double lo = std::max(0.0, best_g - step);
  const double hi = std::min(1.0, best_g + step);
  const double gamma = golden_max([&](double g) { return grid_f(c, k, g); }, lo, hi, 1e-10);
  const double f = grid_f(c, k, gamma);
  return f >= best_f ? std::pair{gamma, f} : std::pair{best_g, best_f};
}

}  // namespace

std::string to_string(BoundVariant variant) {
  return variant == BoundVariant::kRfpa ? "rfpa" : "rtruth";
}

BoundVariant parse_bound_variant(const std::string& name) {
  if (name == "rfpa") return BoundVariant::kRfpa;
  if (name == "rtruth") return BoundVariant::kRtruth;
  throw Error("unknown bound variant '" + name + "'");
}

std::string to_string(CaseOneTerm term) {
  return term == CaseOneTerm::kEtaSpend ? "eta_spend" : "eta_alpha";
}

CaseOneTerm parse_case_one_term(const std::string& name) {
  if (name == "eta_spend") return CaseOneTerm::kEtaSpend;
  if (name == "eta_alpha") return CaseOneTerm::kEtaAlpha;
  throw Error("case1 must be eta_spend or eta_alpha");
}

double bound_m2(double alpha, double beta) {
  require_alpha(alpha);
  require_beta(alpha, beta);
  return 0.5 * (1.0 + std::log(beta) / std::log(alpha));
}

double bound_s2(BoundVariant variant, double alpha, double beta) {
  require_alpha(alpha);
  require_beta(alpha, beta);
  const double la = std::log(alpha);
  if (variant == BoundVariant::kRtruth) {
    return (1.0 - 1.0 / alpha) * (1.0 + 1.0 / beta) / (2.0 * la);
  }
  const double lb = std::log(beta);
  const double ratio = lb / la;
  const double denom = 2.0 * (1.0 + la + lb);
  return (1.0 + ratio) / denom + (1.0 - ratio) / (beta * denom);
}

double g_bound(BoundVariant variant, double alpha, double beta, double gamma, double eta) {
  require_weights(gamma, eta);
  return gamma * bound_m2(alpha, beta) + eta * bound_s2(variant, alpha, beta);
}

double g_rfpa(double alpha, double beta, double gamma, double eta) {
  return g_bound(BoundVariant::kRfpa, alpha, beta, gamma, eta);
}

double g_rtruth(double alpha, double beta, double gamma, double eta) {
  return g_bound(BoundVariant::kRtruth, alpha, beta, gamma, eta);
}

BoundEvaluation eval_f(double alpha, double gamma, BoundVariant variant, BoundOptions options) {
  require_alpha(alpha);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("gamma must lie in [0, 1]");
  if (options.beta_points < 1000) throw Error("beta grid needs at least 1000 points");
  const double eta = 1.0 - gamma;

  BoundEvaluation ev;
  ev.variant = variant;
  ev.alpha = alpha;
  ev.gamma = gamma;
  ev.eta = eta;
  ev.case1 = options.case1;
  ev.term_eta_alpha_literal = eta * alpha;
  ev.term_eta_spend = eta * case_one_coefficient(BoundVariant::kRtruth, alpha, CaseOneTerm::kEtaSpend);
  ev.term_eta_alpha = eta * case_one_coefficient(variant, alpha, options.case1);
  ev.term_gamma = gamma;

  const std::vector<double> betas = beta_grid(alpha, options.beta_points);
  std::size_t arg = 0;
  ev.g_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double g = g_bound(variant, alpha, betas[k], gamma, eta);
    if (options.keep_curve) ev.g_curve.emplace_back(betas[k], g);
    if (g < ev.g_min) {
      ev.g_min = g;
      arg = k;
    }
  }
  ev.beta_at_min = betas[arg];

  const double lo = std::log(betas[arg == 0 ? 0 : arg - 1]);
  const double hi = std::log(betas[std::min(arg + 1, betas.size() - 1)]);
  const double la = std::log(alpha);
  auto g_at = [&](double x) {
    return g_bound(variant, alpha, std::exp(std::clamp(x, -la, la)), gamma, eta);
  };
  if (hi > lo) {
    const double x = golden_min(g_at, lo, hi, options.refine_tol);
    const double g = g_at(x);
    if (g < ev.g_min) {
      ev.g_min = g;
      ev.beta_at_min = std::exp(std::clamp(x, -la, la));
    }
  }
  ev.f_value = std::min({ev.term_eta_alpha, ev.term_gamma, ev.g_min});
  return ev;
}

BoundOptimum optimize_f(BoundVariant variant, OptimizeOptions options) {
  if (!(options.alpha_lo > 1.0) || !(options.alpha_hi <= 4.0) || options.alpha_lo > options.alpha_hi) {
    throw Error("alpha range must lie in (1, 4]");
  }
  if (!(options.gamma_step > 0.0 && options.gamma_step <= 1e-3)) {
    throw Error("gamma step must be in (0, 1e-3]");
  }
  auto value_at = [&](double alpha) {
    const Coefficients c = sample(variant, alpha, options.beta_points);
    return best_gamma(c, case_one_coefficient(variant, alpha, options.case1), options.gamma_step);
  };

  double alpha = options.alpha_lo;
  if (options.alpha_hi > options.alpha_lo) {
    const int n = std::max(2, options.alpha_points);
    const double step = (options.alpha_hi - options.alpha_lo) / (n - 1);
    int best = 0;
    double best_f = -1.0;
    for (int i = 0; i < n; ++i) {
      const double f = value_at(options.alpha_lo + i * step).second;
      if (f > best_f) {
        best_f = f;
        best = i;
      }
    }
    const double lo = options.alpha_lo + std::max(0, best - 1) * step;
    const double hi = options.alpha_lo + std::min(n - 1, best + 1) * step;
    const double refined = golden_max([&](double a) { return value_at(a).second; }, lo, hi, 1e-7);
    alpha = value_at(refined).second >= best_f ? refined : options.alpha_lo + best * step;
  }

  const double gamma = value_at(alpha).first;
  BoundOptions eo;
  eo.beta_points = options.beta_points;
  eo.case1 = options.case1;
  BoundOptimum out;
  out.alpha = alpha;
  out.gamma = gamma;
  out.evaluation = eval_f(alpha, gamma, variant, eo);
  out.f = out.evaluation.f_value;
  out.poa = out.f > 0.0 ? 1.0 / out.f : std::numeric_limits<double>::infinity();
  return out;
}

double rtruth_lb_ratio(double alpha) {
  require_alpha(alpha);
  return 1.0 + 2.0 * std::log(alpha) / (alpha - 1.0 / alpha);
}

LowerBoundInstance make_rtruth_lb_instance(double alpha, double epsilon) {
  require_alpha(alpha);
  const double s = (alpha - 1.0 / alpha) / (2.0 * std::log(alpha));
  if (!(epsilon > 0.0) || !(epsilon < 1.0 / s)) throw Error("epsilon must lie in (0, 1/s)");
  // Advertiser 1 wins query 1 for free and query 2 with certainty at a
  // price equal to 1; advertiser 2 cannot win any of query 2 within ROS.
  const Instance instance(Matrix::from_rows({{1.0, epsilon}, {0.0, 1.0 / s}}));
  const double c = alpha / (epsilon * s);
  BidProfile bids(instance, Matrix::from_rows({{c * 1.0, c * epsilon}, {0.0, 1.0 / s}}));
  return {instance,
          std::move(bids),
          MechanismSpec::rtruth(alpha),
          0.0,
          (1.0 + 1.0 / s) / (1.0 + epsilon),
          {{"alpha", alpha}, {"epsilon", epsilon}, {"s", s}}};
}

LowerBoundInstance make_det_lb_instance(MechanismKind mechanism, double b1, double b2,
                                        double epsilon, double gamma) {
  if (mechanism != MechanismKind::kFpa && mechanism != MechanismKind::kSpa) {
    throw Error("deterministic lower bound needs FPA or SPA");
  }
  if (!(b1 > 0.0) || !(b2 > b1) || !std::isfinite(b2)) throw Error("need 0 < B1 < B2");
  if (!(epsilon > 0.0) || !(epsilon < gamma)) throw Error("need 0 < epsilon < gamma");
  // price(b1, b2): what the top bidder pays when bidding b1 against b2.
  auto price = [&](double own, double other) {
    return mechanism == MechanismKind::kFpa ? own : other;
  };
  const double p22 = price(b2, b2);
  const double p10 = price(b1, 0.0);
  if (!(p22 - epsilon >= epsilon * p10)) throw Error("B2 too small for epsilon");
  const Instance instance(
      Matrix::from_rows({{p22 + p10, epsilon * p10}, {0.0, p22 - epsilon}}));
  BidProfile bids(instance, Matrix::from_rows({{b1, b2}, {0.0, 0.0}}));
  const MechanismSpec mech =
      mechanism == MechanismKind::kFpa ? MechanismSpec::fpa() : MechanismSpec::spa();
  return {instance,
          std::move(bids),
          mech,
          gamma,
          (2.0 * p22 + p10 - epsilon) / (p22 + p10 * (1.0 + epsilon)),
          {{"B1", b1}, {"B2", b2}, {"epsilon", epsilon}}};
}

void write_bound_curve_csv(std::ostream& out, const std::vector<BoundEvaluation>& evaluations) {
  out << "alpha,gamma,beta,g,term_eta_alpha,term_gamma,f\n";
  for (const BoundEvaluation& ev : evaluations) {
    for (const auto& [beta, g] : ev.g_curve) {
      out << format_double(ev.alpha) << ',' << format_double(ev.gamma) << ','
          << format_double(beta) << ',' << format_double(g) << ','
          << format_double(ev.term_eta_alpha) << ',' << format_double(ev.term_gamma) << ','
          << format_double(ev.f_value) << '\n';
    }
  }
}

}  // namespace arena
