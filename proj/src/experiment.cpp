#include "arena/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace arena {

std::string to_string(Setup setup) {
  switch (setup) {
    case Setup::kA: return "a";
    case Setup::kB: return "b";
    case Setup::kC: return "c";
    case Setup::kD: return "d";
    case Setup::kFile: return "file";
  }
  return "?";
}

Setup parse_setup(const std::string& name) {
  if (name == "a") return Setup::kA;
  if (name == "b") return Setup::kB;
  if (name == "c") return Setup::kC;
  if (name == "d") return Setup::kD;
  if (name == "file") return Setup::kFile;
  throw Error("unknown setup '" + name + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng trial_rng(std::uint64_t seed, int trial, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(splitmix64(seed) ^ stream) + static_cast<std::uint64_t>(trial)));
}

double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Instance gen_instance(Setup setup, int queries, Rng& rng) {
  switch (setup) {
    case Setup::kC: return Instance(Matrix::from_rows({{1.0, 0.01}, {0.01, 0.99}}));
    case Setup::kD: return Instance(Matrix::from_rows({{1.0}, {0.9}}));
    case Setup::kA:
    case Setup::kB: break;
    case Setup::kFile: throw Error("setup 'file' has no generator");
  }
  if (queries < 1) throw Error("queries must be positive");
  Matrix values(2, static_cast<std::size_t>(queries));
  for (std::size_t i = 0; i < 2; ++i) {
    double lo = 0.3;
    double hi = 1.0;
    if (setup == Setup::kB) {
      const bool high = (rng() >> 63) != 0;
      lo = high ? 1.0 : 0.3;
      hi = high ? 1.2 : 0.5;
    }
    for (std::size_t j = 0; j < values.cols(); ++j) values(i, j) = uniform(rng, lo, hi);
  }
  return Instance(std::move(values));
}

namespace {

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("bad number '" + s + "'");
  }
  if (used != s.size()) throw Error("bad number '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

std::vector<double> parse_alpha_range(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) throw Error("alpha range must be lo:hi:step");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw Error("alpha range needs lo <= hi and step > 0");
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int k = 0; k <= n; ++k) {
      // Rounded to 12 decimals so 1.05 + 3 * 0.05 prints as 1.2.
      out.push_back(std::round((lo + k * step) * 1e12) / 1e12);
    }
  } else {
    for (const std::string& part : split(text, ',')) out.push_back(parse_number(part));
  }
  if (out.empty()) throw Error("empty alpha list");
  for (double a : out) {
    if (!(a >= 1.0) || !std::isfinite(a)) throw Error("alpha must be >= 1");
  }
  return out;
}

std::vector<double> default_alphas() { return parse_alpha_range("1.05:2.0:0.05"); }

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ARENA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Task {
  int trial;
  MechanismSpec mechanism;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw Error("trials must be at least 1");
  if (config.mechanisms.empty()) throw Error("no mechanisms");

  std::vector<Instance> instances;
  if (config.setup == Setup::kFile) {
    const Instance inst = load_instance(config.instance_file);
    instances.assign(config.trials, inst);
  } else {
    for (int t = 0; t < config.trials; ++t) {
      Rng rng = trial_rng(config.seed, t);
      instances.push_back(gen_instance(config.setup, config.queries, rng));
    }
  }

  std::vector<MechanismSpec> specs;
  for (MechanismKind kind : config.mechanisms) {
    if (kind == MechanismKind::kRfpa || kind == MechanismKind::kRtruth) {
      for (double a : config.alphas) specs.push_back({kind, a});
    } else {
      specs.push_back({kind, 1.0});
    }
  }
  std::vector<Task> tasks;
  for (int t = 0; t < config.trials; ++t) {
    for (const MechanismSpec& m : specs) tasks.push_back({t, m});
  }

  const std::string setup_name = to_string(config.setup);
  std::vector<ExperimentRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      DynamicsOptions options = config.dynamics;
      options.seed = static_cast<std::uint64_t>(task.trial);
      const EquilibriumReport rep = run_dynamics(instances[task.trial], task.mechanism, options);
      rows[k] = {task.trial, setup_name, to_string(task.mechanism.kind), task.mechanism.alpha,
                 rep.converged, rep.iterations, rep.lw_eq, rep.lw_opt, rep.poa, rep.gamma_achieved};
    }
  };
  const int threads = std::min<int>(worker_count(config.threads), static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();

  ExperimentResult result;
  result.rows = std::move(rows);
  for (const MechanismSpec& m : specs) {
    SummaryRow s{setup_name, to_string(m.kind), m.alpha, 0, 0, 0, 0.0};
    double total = 0.0;
    for (const ExperimentRow& r : result.rows) {
      if (r.mechanism != s.mechanism || r.alpha != s.alpha) continue;
      ++s.trials;
      if (r.converged) {
        ++s.converged;
        total += r.poa;
      } else {
        ++s.not_converged;
      }
    }
    s.mean_poa = s.converged > 0 ? total / s.converged : std::numeric_limits<double>::quiet_NaN();
    result.summary.push_back(s);
  }
  return result;
}

const SummaryRow& find_summary(const ExperimentResult& result, MechanismKind kind, double alpha) {
  const std::string name = to_string(kind);
  for (const SummaryRow& s : result.summary) {
    if (s.mechanism == name && std::abs(s.alpha - alpha) < 1e-12) return s;
  }
  throw Error("no summary for " + name + " at alpha " + format_double(alpha));
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "trial,setup,mechanism,alpha,converged,iterations,lw_eq,lw_opt,poa,gamma_achieved\n";
  for (const ExperimentRow& r : rows) {
    out << r.trial << ',' << r.setup << ',' << r.mechanism << ',' << format_double(r.alpha) << ','
        << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << format_double(r.lw_eq) << ','
        << format_double(r.lw_opt) << ',' << format_double(r.poa) << ','
        << format_double(r.gamma_achieved) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "setup,mechanism,alpha,trials,converged,not_converged,mean_poa\n";
  for (const SummaryRow& s : rows) {
    out << s.setup << ',' << s.mechanism << ',' << format_double(s.alpha) << ',' << s.trials << ','
        << s.converged << ',' << s.not_converged << ',' << format_double(s.mean_poa) << '\n';
  }
}

BoundsRun run_bounds(BoundVariant variant, const std::vector<double>& alphas, double gamma,
                     CaseOneTerm case1) {
  if (alphas.empty()) throw Error("no alphas");
  BoundsRun run;
  BoundOptions eo;
  eo.case1 = case1;
  for (double a : alphas) {
    double g = gamma;
    if (g < 0.0) {
      OptimizeOptions o;
      o.alpha_lo = o.alpha_hi = a;
      o.case1 = case1;
      g = optimize_f(variant, o).gamma;
    }
    run.curves.push_back(eval_f(a, g, variant, eo));
  }
  OptimizeOptions o;
  o.alpha_lo = *std::min_element(alphas.begin(), alphas.end());
  o.alpha_hi = *std::max_element(alphas.begin(), alphas.end());
  o.case1 = case1;
  run.optimum = optimize_f(variant, o);
  return run;
}

void write_bound_sweep_csv(std::ostream& out, const std::vector<BoundEvaluation>& curves) {
  out << "alpha,gamma,f,poa,term_eta_alpha,term_eta_alpha_literal,term_eta_spend,term_gamma,"
         "g_min,beta_at_min\n";
  for (const BoundEvaluation& e : curves) {
    const double poa = e.f_value > 0.0 ? 1.0 / e.f_value : std::numeric_limits<double>::infinity();
    out << format_double(e.alpha) << ',' << format_double(e.gamma) << ','
        << format_double(e.f_value) << ',' << format_double(poa) << ','
        << format_double(e.term_eta_alpha) << ',' << format_double(e.term_eta_alpha_literal) << ','
        << format_double(e.term_eta_spend) << ',' << format_double(e.term_gamma) << ','
        << format_double(e.g_min) << ',' << format_double(e.beta_at_min) << '\n';
  }
}

LowerBoundRow verify_lower_bound(const LowerBoundInstance& lb, const std::string& kind) {
  LowerBoundRow row;
  row.kind = kind;
  row.alpha = lb.mechanism.alpha;
  for (const auto& [name, value] : lb.params) {
    if (name == "B1") row.b1 = value;
    if (name == "B2") row.b2 = value;
    if (name == "epsilon") row.epsilon = value;
  }
  row.gamma = lb.gamma;
  row.predicted_ratio = lb.predicted_ratio;
  const ProfileOutcome out = evaluate_profile(lb.instance, lb.bids, lb.mechanism);
  row.measured_ratio =
      poa_ratio(optimal_welfare(lb.instance).welfare, liquid_welfare(lb.instance, out.allocation));
  const GammaEqCheck check = check_gamma_equilibrium(lb.instance, lb.mechanism, lb.bids, lb.gamma);
  row.equilibrium = check.is_equilibrium;
  row.achieved_gamma = check.achieved_gamma;
  return row;
}

void write_lower_bound_csv(std::ostream& out, const std::vector<LowerBoundRow>& rows) {
  out << "kind,alpha,B1,B2,epsilon,gamma,predicted_ratio,measured_ratio,equilibrium,achieved_gamma\n";
  for (const LowerBoundRow& r : rows) {
    out << r.kind << ',' << format_double(r.alpha) << ',' << format_double(r.b1) << ','
        << format_double(r.b2) << ',' << format_double(r.epsilon) << ',' << format_double(r.gamma)
        << ',' << format_double(r.predicted_ratio) << ',' << format_double(r.measured_ratio) << ','
        << (r.equilibrium ? 1 : 0) << ',' << format_double(r.achieved_gamma) << '\n';
  }
}

}  // namespace arena
