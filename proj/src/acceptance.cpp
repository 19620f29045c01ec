#include "arena/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "arena/autobidder.hpp"
#include "arena/bounds.hpp"
#include "arena/equilibrium.hpp"
#include "arena/experiment.hpp"

namespace arena {

namespace {

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw Error("cannot write " + (std::filesystem::path(dir) / name).string());
  out << text;
}

CriterionResult start(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

struct Point {
  double cost;
  double value;
  double p;
};

/// Cheapest way to reach each value level: sorted by cost, values strictly increasing.
std::vector<Point> frontier(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.value > b.value);
  });
  std::vector<Point> out;
  for (const Point& p : pts) {
    if (out.empty() || p.value > out.back().value) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

CriterionResult criterion1() {
  CriterionResult r = start(1, "rFPA(1.4) bound at gamma 0.56");
  const auto t0 = std::chrono::steady_clock::now();
  const BoundEvaluation ev = eval_f(1.4, 0.56, BoundVariant::kRfpa);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double target = 1.0 / 1.8;
  r.passed = ev.f_value >= target - 1e-6 && std::abs(ev.term_eta_alpha - 0.616) <= 1e-9 &&
             ev.term_gamma == 0.56 && ev.g_min >= target && r.seconds < 1.0;
  r.detail = "f=" + fmt("%.9f", ev.f_value) + " eta*alpha=" + fmt("%.12f", ev.term_eta_alpha) +
             " gamma=" + fmt("%g", ev.term_gamma) + " min_beta g=" + fmt("%.9f", ev.g_min) +
             " at beta=" + fmt("%.6f", ev.beta_at_min) + " (1/1.8=" + fmt("%.9f", target) + ")";
  return r;
}

CriterionResult criterion2() {
  CriterionResult r = start(2, "rTruth bound optimum");
  const auto t0 = std::chrono::steady_clock::now();
  OptimizeOptions spend;
  spend.case1 = CaseOneTerm::kEtaSpend;
  OptimizeOptions literal;
  literal.case1 = CaseOneTerm::kEtaAlpha;
  const BoundOptimum a = optimize_f(BoundVariant::kRtruth, spend);
  const BoundOptimum b = optimize_f(BoundVariant::kRtruth, literal);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = a.poa <= 1.91 && r.seconds < 30.0;
  r.detail = "spend term: alpha*=" + fmt("%.6f", a.alpha) + " gamma*=" + fmt("%.6f", a.gamma) +
             " poa=" + fmt("%.6f", a.poa) + "; eta*alpha term: alpha*=" + fmt("%.6f", b.alpha) +
             " poa=" + fmt("%.6f", b.poa) + "; first terms at optimum " +
             fmt("%.6f", a.evaluation.term_eta_spend) + " vs " +
             fmt("%.6f", a.evaluation.term_eta_alpha_literal) +
             (std::abs(a.poa - b.poa) < 1e-9 ? " (not binding)" : " (binding)");
  return r;
}

CriterionResult criterion3() {
  CriterionResult r = start(3, "Myerson price vs closed form");
  const double alphas[] = {1.1, 1.4, 2.0, 3.0};
  double worst = 0.0;
  for (double alpha : alphas) {
    for (int k = 0; k < 50; ++k) {
      // beta from 1/(2 alpha) to 2 alpha, log-spaced, so both flat regions are hit.
      const double lo = std::log(0.5 / alpha);
      const double hi = std::log(2.0 * alpha);
      const double beta = std::exp(lo + (hi - lo) * k / 49.0);
      const double other = 1.0;
      const double numeric = myerson_price_numeric(
          [&](double z) { return randomized_win_prob(z, other, alpha); }, beta, other);
      const double closed = rtruth_outcome(beta, other, alpha).expected_payment[0];
      worst = std::max(worst, std::abs(numeric - closed));
    }
  }
  r.passed = worst <= 1e-6;
  r.detail = "max abs error " + fmt("%.3g", worst) + " over 50x4 (beta, alpha) grid";
  return r;
}

CriterionResult criterion4() {
  CriterionResult r = start(4, "rTruth lower-bound instance");
  const LowerBoundRow row = verify_lower_bound(make_rtruth_lb_instance(1.4, 1e-3), "rtruth");
  std::string sweep;
  double last = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const LowerBoundRow s = verify_lower_bound(make_rtruth_lb_instance(1.4, eps), "rtruth");
    last = s.equilibrium ? s.measured_ratio : 0.0;
    sweep += " " + fmt("%g", eps) + "->" + fmt("%.6f", s.measured_ratio);
  }
  r.passed = row.equilibrium && row.achieved_gamma == 0.0 && row.measured_ratio >= 1.978 &&
             row.measured_ratio <= 1.982 && last >= 1.98;
  r.detail = "measured " + fmt("%.6f", row.measured_ratio) + " predicted " +
             fmt("%.6f", row.predicted_ratio) + " gamma-check " + (row.equilibrium ? "ok" : "FAILED") +
             "; eps sweep:" + sweep + " (limit " + fmt("%.6f", rtruth_lb_ratio(1.4)) + ")";
  return r;
}

CriterionResult criterion5() {
  CriterionResult r = start(5, "FPA deterministic lower bound");
  const LowerBoundRow row =
      verify_lower_bound(make_det_lb_instance(MechanismKind::kFpa, 1.0, 1e4, 1e-3, 1e-2), "fpa");
  r.passed = row.equilibrium && row.measured_ratio >= 1.99;
  r.detail = "measured " + fmt("%.6f", row.measured_ratio) + " predicted " +
             fmt("%.6f", row.predicted_ratio) + " achieved gamma " + fmt("%.3g", row.achieved_gamma);
  return r;
}

CriterionResult criterion6(std::uint64_t seed) {
  CriterionResult r = start(6, "FPA equilibria within factor 2");
  int converged = 0;
  int violations = 0;
  double worst = 1.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng = trial_rng(seed, t, 6000);
    const Instance inst = gen_instance(Setup::kA, 10, rng);
    DynamicsOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    opt.scan_gamma = false;
    const EquilibriumReport rep = run_dynamics(inst, MechanismSpec::fpa(), opt);
    if (!rep.converged) continue;
    ++converged;
    worst = std::max(worst, rep.poa);
    if (rep.lw_eq < rep.lw_opt / 2.0 - 1e-6) ++violations;
  }
  r.passed = violations == 0 && converged > 0;
  r.detail = std::to_string(converged) + "/100 converged, " + std::to_string(violations) +
             " violations, worst converged PoA " + fmt("%.6f", worst);
  return r;
}

CriterionResult criterion7(std::uint64_t seed) {
  CriterionResult r = start(7, "rFPA(1.4) equilibria undominated");
  const double alpha = 1.4;
  int converged = 0;
  int lemma_flags = 0;
  int grid_violations = 0;
  for (int t = 0; t < 50; ++t) {
    Rng rng = trial_rng(seed, t, 7000);
    const Instance inst = gen_instance(Setup::kA, 10, rng);
    DynamicsOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    opt.scan_gamma = false;
    const EquilibriumReport rep = run_dynamics(inst, MechanismSpec::rfpa(alpha), opt);
    if (!rep.converged) continue;
    ++converged;
    lemma_flags += static_cast<int>(check_lemma_conditions(inst, rep.bids, alpha).flags.size());
    grid_violations += static_cast<int>(
        check_undominated(inst, rep.bids, MechanismSpec::rfpa(alpha)).violations.size());
  }
  r.passed = converged > 0 && lemma_flags == 0 && grid_violations == 0;
  r.detail = std::to_string(converged) + "/50 converged, " + std::to_string(lemma_flags) +
             " lemma flags, " + std::to_string(grid_violations) + " grid violations";
  return r;
}

CriterionResult criterion8(std::uint64_t seed) {
  CriterionResult r = start(8, "rFPA best response vs grid oracle");
  const double alphas[] = {1.1, 1.4, 2.0};
  double worst = 0.0;
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng = trial_rng(seed, t, 8000);
    const int m = 1 + static_cast<int>(rng() % 3);
    const double alpha = alphas[t % 3];
    const std::size_t who = rng() % 2;
    Matrix values(2, m);
    Matrix bids(2, m);
    for (int j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < 2; ++i) values(i, j) = uniform(rng, 0.3, 1.0);
      bids(1 - who, j) = uniform(rng, 0.2, 1.5);
      bids(who, j) = values(who, j);
    }
    const Instance inst(values);
    const BidProfile profile(inst, bids);
    const BestResponse br = rfpa_best_response(inst, who, profile, alpha);
    std::vector<double> own(values.row(who).begin(), values.row(who).end());
    std::vector<double> opp(bids.row(1 - who).begin(), bids.row(1 - who).end());
    const double oracle = rfpa_grid_oracle(own, opp, 1.0, alpha, 1e-4);
    const double err = std::abs(br.value - oracle) / std::max(oracle, 1e-9);
    const bool feasible = br.spend <= br.value + 1e-9;
    worst = std::max(worst, err);
    if (err > 1e-3 || !feasible) ++failures;
  }
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + "/200 mismatches, worst relative gap " + fmt("%.3g", worst);
  return r;
}

CriterionResult criterion9(const AcceptanceOptions& options) {
  CriterionResult r = start(9, "experiment orderings");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> problems;
  std::string detail;
  for (Setup setup : {Setup::kC, Setup::kD, Setup::kA, Setup::kB}) {
    ExperimentConfig config;
    config.setup = setup;
    config.seed = options.seed;
    config.threads = options.threads;
    const ExperimentResult res = run_experiment(config);
    std::ostringstream rows;
    std::ostringstream summary;
    write_rows_csv(rows, res.rows);
    write_summary_csv(summary, res.summary);
    write_file(options.out_dir, "experiment_" + to_string(setup) + ".csv", rows.str());
    write_file(options.out_dir, "summary_" + to_string(setup) + ".csv", summary.str());

    const double spa = find_summary(res, MechanismKind::kSpa).mean_poa;
    const double rfpa = find_summary(res, MechanismKind::kRfpa, 1.4).mean_poa;
    const double rtruth = find_summary(res, MechanismKind::kRtruth, 1.4).mean_poa;
    int not_converged = 0;
    for (const SummaryRow& s : res.summary) not_converged += s.not_converged;
    detail += " " + to_string(setup) + ": spa=" + fmt("%.4f", spa) + " rfpa=" + fmt("%.4f", rfpa) +
              " rtruth=" + fmt("%.4f", rtruth) + " nonconv=" + std::to_string(not_converged) + ";";
    if (setup == Setup::kC) {
      if (!(rfpa < spa)) problems.push_back("c: rFPA not below SPA");
      if (!(rfpa <= rtruth)) problems.push_back("c: rFPA above rTruth");
    } else if (setup == Setup::kD) {
      if (std::abs(spa - 1.0) > 1e-9) problems.push_back("d: SPA mean PoA not 1");
      if (!(rfpa > 1.0)) problems.push_back("d: rFPA(1.4) mean PoA not above 1");
    } else {
      const std::size_t expected = 1 + 2 * config.alphas.size();
      if (res.summary.size() != expected) problems.push_back(to_string(setup) + ": incomplete curve");
      for (const SummaryRow& s : res.summary) {
        if (s.converged == 0 || !std::isfinite(s.mean_poa)) {
          problems.push_back(to_string(setup) + ": no converged trial for " + s.mechanism + " " +
                             format_double(s.alpha));
        }
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds >= 300.0) problems.push_back("runtime over 5 minutes");
  r.passed = problems.empty();
  for (const std::string& p : problems) detail += " [" + p + "]";
  r.detail = detail.substr(1);
  return r;
}

CriterionResult criterion10(const AcceptanceOptions& options) {
  CriterionResult r = start(10, "byte-identical reruns");
  auto once = [&](int threads) {
    ExperimentConfig config;
    config.setup = Setup::kA;
    config.seed = options.seed;
    config.trials = 3;
    config.queries = 20;
    config.mechanisms = {MechanismKind::kSpa, MechanismKind::kFpa, MechanismKind::kRfpa,
                         MechanismKind::kRtruth};
    config.alphas = {1.1, 1.4, 2.0};
    config.threads = threads;
    const ExperimentResult res = run_experiment(config);
    std::ostringstream out;
    write_rows_csv(out, res.rows);
    write_summary_csv(out, res.summary);
    std::vector<BoundEvaluation> curve{eval_f(1.4, 0.56, BoundVariant::kRfpa)};
    write_bound_curve_csv(out, curve);
    return out.str();
  };
  const std::string first = once(1);
  const std::string second = once(std::max(2, worker_count(options.threads)));
  r.passed = first == second;
  r.detail = std::to_string(first.size()) + " bytes, " + (r.passed ? "identical" : "DIFFERENT") +
             " across a 1-thread and a multi-thread run";
  write_file(options.out_dir, "determinism.csv", first);
  return r;
}

void write_side_outputs(const AcceptanceOptions& options) {
  if (options.out_dir.empty()) return;
  std::ostringstream curve;
  write_bound_curve_csv(curve, {eval_f(1.4, 0.56, BoundVariant::kRfpa)});
  write_file(options.out_dir, "bound_rfpa_1.4.csv", curve.str());
  std::vector<LowerBoundRow> rows;
  for (double a : parse_alpha_range("1.1:2.0:0.1")) {
    rows.push_back(verify_lower_bound(make_rtruth_lb_instance(a, 1e-3), "rtruth"));
  }
  for (double b2 : {1e2, 1e3, 1e4}) {
    rows.push_back(verify_lower_bound(make_det_lb_instance(MechanismKind::kFpa, 1.0, b2, 1e-3, 1e-2), "fpa"));
    rows.push_back(verify_lower_bound(make_det_lb_instance(MechanismKind::kSpa, 1.0, b2, 1e-3, 1e-2), "spa"));
  }
  std::ostringstream lb;
  write_lower_bound_csv(lb, rows);
  write_file(options.out_dir, "lower_bounds.csv", lb.str());
}

}  // namespace

double rfpa_grid_oracle(const std::vector<double>& values, const std::vector<double>& opponent,
                        double target, double alpha, double log_step) {
  const std::size_t m = values.size();
  if (m == 0 || m > 3 || m != opponent.size()) throw Error("grid oracle supports one to three queries");
  if (!(alpha > 1.0) || !(log_step > 0.0)) throw Error("grid oracle needs alpha > 1 and a positive step");
  const double la = std::log(alpha);
  for (double o : opponent) {
    if (!(o > 0.0)) throw Error("grid oracle needs positive opponent bids");
  }
  // Cost (spend minus target * value) of winning query j with probability p.
  auto cost = [&](std::size_t j, double p) {
    if (p <= 0.0) return 0.0;
    return p * (opponent[j] * std::pow(alpha, 2.0 * p - 1.0) - target * values[j]);
  };

  std::vector<std::vector<Point>> fronts;
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = std::log(opponent[j]) - la;
    const int steps = static_cast<int>(std::ceil(2.0 * la / log_step));
    std::vector<Point> pts{{0.0, 0.0, 0.0}};
    for (int k = 0; k <= steps; ++k) {
      const double x = std::min(lo + k * log_step, lo + 2.0 * la);
      const double p = std::clamp(0.5 * (1.0 + (x - std::log(opponent[j])) / la), 0.0, 1.0);
      pts.push_back({p * (std::exp(x) - target * values[j]), p * values[j], p});
    }
    fronts.push_back(frontier(std::move(pts)));
  }

  // Exhaustive search over grid combinations with total cost <= 0.
  std::vector<double> best_p(m, 0.0);
  double best = -1.0;
  auto take = [&](std::initializer_list<const Point*> chosen) {
    double v = 0.0;
    for (const Point* q : chosen) v += q->value;
    if (v <= best) return;
    best = v;
    std::size_t j = 0;
    for (const Point* q : chosen) best_p[j++] = q->p;
  };
  // Last frontier index with cost <= budget, or -1.
  auto last_within = [](const std::vector<Point>& f, double budget) {
    auto it = std::upper_bound(f.begin(), f.end(), budget,
                               [](double b, const Point& q) { return b < q.cost; });
    return static_cast<std::ptrdiff_t>(it - f.begin()) - 1;
  };
  if (m == 1) {
    const std::ptrdiff_t k = last_within(fronts[0], 0.0);
    take({&fronts[0][k]});
  } else if (m == 2) {
    for (const Point& a : fronts[0]) {
      const std::ptrdiff_t k = last_within(fronts[1], -a.cost);
      if (k >= 0) take({&a, &fronts[1][k]});
    }
  } else {
    const std::vector<Point>& f3 = fronts[2];
    for (const Point& a : fronts[0]) {
      std::ptrdiff_t k = static_cast<std::ptrdiff_t>(f3.size()) - 1;
      for (const Point& b : fronts[1]) {
        const double budget = -a.cost - b.cost;
        while (k >= 0 && f3[k].cost > budget) --k;
        if (k < 0) break;
        take({&a, &b, &f3[k]});
      }
    }
  }

  // The grid leaves up to one step of unused slack. Repeatedly give it to
  // the query whose win probability can rise the most in value; the cost is
  // convex in p, so the feasible set is an interval and bisection finds its end.
  auto raised = [&](std::size_t j) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += cost(i, best_p[i]);
    const double limit = cost(j, best_p[j]) - total;
    if (cost(j, 1.0) <= limit) return 1.0;
    double lo = best_p[j];
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cost(j, mid) <= limit ? lo : hi) = mid;
    }
    return lo;
  };
  for (std::size_t round = 0; round < 4 * m; ++round) {
    std::size_t pick = m;
    double gain = 0.0;
    double to = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double p = raised(j);
      if ((p - best_p[j]) * values[j] > gain) {
        gain = (p - best_p[j]) * values[j];
        pick = j;
        to = p;
      }
    }
    if (pick == m) break;
    best_p[pick] = to;
  }
  double value = 0.0;
  for (std::size_t j = 0; j < m; ++j) value += best_p[j] * values[j];
  return std::max(best, value);
}

std::string format_criterion(const CriterionResult& result) {
  char head[96];
  std::snprintf(head, sizeof head, "%s [%2d] %s (%.2f s): ", result.passed ? "PASS" : "FAIL",
                result.id, result.name.c_str(), result.seconds);
  return head + result.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
  const std::vector<std::function<CriterionResult()>> criteria = {
      criterion1,
      criterion2,
      criterion3,
      criterion4,
      criterion5,
      [&] { return criterion6(options.seed); },
      [&] { return criterion7(options.seed); },
      [&] { return criterion8(options.seed); },
      [&] { return criterion9(options); },
      [&] { return criterion10(options); },
  };
  std::vector<CriterionResult> results;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = criteria[k]();
    } catch (const std::exception& e) {
      r = start(id, "criterion " + std::to_string(id));
      r.detail = std::string("exception: ") + e.what();
    }
    if (r.seconds == 0.0) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    if (log) *log << format_criterion(r) << std::endl;
    results.push_back(std::move(r));
  }
  write_side_outputs(options);
  return results;
}

}  // namespace arena
