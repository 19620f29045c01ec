// arena: experiments, bound curves, lower-bound instances and the
// acceptance suite from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arena/acceptance.hpp"
#include "arena/bounds.hpp"
#include "arena/experiment.hpp"

namespace fs = std::filesystem;
using namespace arena;

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  std::cerr << "wrote " << path.string() << '\n';
  return out;
}

std::vector<MechanismKind> parse_mechanisms(const std::string& list) {
  std::vector<MechanismKind> out;
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) out.push_back(MechanismSpec::parse(name).kind);
  if (out.empty()) throw Error("no mechanisms given");
  return out;
}

void maybe_plot(const std::string& mode, const std::string& dir) {
  const std::string cmd =
      "python3 \"" ARENA_PLOT_SCRIPT "\" " + mode + " \"" + dir + "\"";
  if (std::system(cmd.c_str()) != 0) std::cerr << "plotting failed (CSV output is unaffected)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auto-bidding auction simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Best-response dynamics over a setup");
  std::string setup = "a";
  std::string instance_file;
  std::string mechanisms = "spa,rfpa,rtruth";
  std::string alphas = "1.05:2.0:0.05";
  int trials = 20;
  std::uint64_t seed = 0;
  int queries = 50;
  int threads = 0;
  int max_rounds = 500;
  std::string out_dir = "results";
  bool plot = false;
  run->add_option("--setup", setup, "a, b, c, d or file")->check(CLI::IsMember({"a", "b", "c", "d", "file"}));
  run->add_option("--instance", instance_file, "Instance file for --setup file");
  run->add_option("--mechanisms", mechanisms, "Comma list of spa, fpa, rfpa, rtruth");
  run->add_option("--alphas", alphas, "lo:hi:step or a comma list");
  run->add_option("--trials", trials)->check(CLI::PositiveNumber);
  run->add_option("--seed", seed);
  run->add_option("--queries", queries, "Queries per instance for setups a and b")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads (default: ARENA_THREADS or all cores)");
  run->add_option("--max-rounds", max_rounds)->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir);
  run->add_flag("--plot", plot, "Render PNGs with tools/plot_results.py");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate the PoA bound f(alpha)");
  std::string variant = "rfpa";
  std::string bound_alphas;
  double alpha = 1.4;
  double gamma = -1.0;
  std::string case1 = "eta_spend";
  std::string bounds_out = "results";
  bounds->add_option("--variant", variant)->check(CLI::IsMember({"rfpa", "rtruth"}));
  bounds->add_option("--alpha", alpha, "Single alpha");
  bounds->add_option("--alphas", bound_alphas, "Alpha sweep lo:hi:step (overrides --alpha)");
  bounds->add_option("--gamma", gamma, "Weight gamma; omitted means optimized per alpha");
  bounds->add_option("--case1", case1, "eta_spend or eta_alpha (rtruth only)");
  bounds->add_option("--out", bounds_out);
  bounds->add_flag("--plot", plot);

  // lb
  auto* lb = app.add_subcommand("lb", "Build and verify a lower-bound instance");
  std::string kind = "rtruth";
  double eps = 1e-3;
  double b1 = 1.0;
  double b2 = 1e3;
  double lb_gamma = 1e-2;
  std::string lb_out;
  lb->add_option("--kind", kind)->check(CLI::IsMember({"rtruth", "fpa", "spa"}));
  lb->add_option("--alpha", alpha);
  lb->add_option("--eps", eps);
  lb->add_option("--b1", b1);
  lb->add_option("--b2", b2);
  lb->add_option("--gamma", lb_gamma, "Declared gamma for fpa/spa");
  lb->add_option("--out", lb_out, "Directory for lower_bound.csv and the instance file");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  AcceptanceOptions acc;
  acc.out_dir = "results/verify";
  verify->add_option("--seed", acc.seed);
  verify->add_option("--out", acc.out_dir);
  verify->add_option("--threads", acc.threads);
  verify->add_option("--only", acc.only, "Criterion ids to run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentConfig config;
      config.setup = parse_setup(setup);
      config.instance_file = instance_file;
      if (config.setup == Setup::kFile && instance_file.empty()) throw Error("--setup file needs --instance");
      config.mechanisms = parse_mechanisms(mechanisms);
      config.alphas = parse_alpha_range(alphas);
      config.trials = trials;
      config.seed = seed;
      config.queries = queries;
      config.threads = threads;
      config.dynamics.max_rounds = max_rounds;
      const ExperimentResult res = run_experiment(config);
      {
        auto out = open_out(out_dir, "experiment_" + setup + ".csv");
        write_rows_csv(out, res.rows);
      }
      {
        auto out = open_out(out_dir, "summary_" + setup + ".csv");
        write_summary_csv(out, res.summary);
      }
      write_summary_csv(std::cout, res.summary);
      if (plot) maybe_plot("experiment", out_dir);
      return 0;
    }

    if (bounds->parsed()) {
      const BoundVariant v = parse_bound_variant(variant);
      const std::vector<double> list = bound_alphas.empty() ? std::vector<double>{alpha}
                                                            : parse_alpha_range(bound_alphas);
      const BoundsRun res = run_bounds(v, list, gamma, parse_case_one_term(case1));
      {
        auto out = open_out(bounds_out, "bound_curve_" + variant + ".csv");
        write_bound_curve_csv(out, res.curves);
      }
      {
        auto out = open_out(bounds_out, "bound_sweep_" + variant + ".csv");
        write_bound_sweep_csv(out, res.curves);
      }
      write_bound_sweep_csv(std::cout, res.curves);
      std::cout << "optimum over alpha range: alpha=" << format_double(res.optimum.alpha)
                << " gamma=" << format_double(res.optimum.gamma)
                << " f=" << format_double(res.optimum.f) << " poa=" << format_double(res.optimum.poa)
                << '\n';
      if (plot) maybe_plot("bounds", bounds_out);
      return 0;
    }

    if (lb->parsed()) {
      const LowerBoundInstance inst =
          kind == "rtruth" ? make_rtruth_lb_instance(alpha, eps)
                           : make_det_lb_instance(kind == "fpa" ? MechanismKind::kFpa : MechanismKind::kSpa,
                                                  b1, b2, eps, lb_gamma);
      const LowerBoundRow row = verify_lower_bound(inst, kind);
      write_lower_bound_csv(std::cout, {row});
      if (!lb_out.empty()) {
        auto out = open_out(lb_out, "lower_bound_" + kind + ".csv");
        write_lower_bound_csv(out, {row});
        save_instance((fs::path(lb_out) / ("lower_bound_" + kind + ".txt")).string(), inst.instance);
      }
      return row.equilibrium ? 0 : 1;
    }

    if (verify->parsed()) {
      const std::vector<CriterionResult> results = run_acceptance(acc, &std::cout);
      int failed = 0;
      for (const CriterionResult& r : results) failed += r.passed ? 0 : 1;
      std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
