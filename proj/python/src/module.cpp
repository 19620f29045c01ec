#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arena/autobidder.hpp"
#include "arena/bounds.hpp"
#include "arena/equilibrium.hpp"
#include "arena/experiment.hpp"

namespace py = pybind11;
using namespace arena;

namespace {

using Rows = std::vector<std::vector<double>>;

MechanismKind parse_kind(const std::string& name) { return MechanismSpec::parse(name).kind; }

py::dict outcome_dict(const ProfileOutcome& o) {
  py::dict d;
  d["allocation"] = o.allocation.to_rows();
  d["payment"] = o.payment.to_rows();
  d["value"] = o.value;
  d["spend"] = o.spend;
  return d;
}

py::dict row_dict(const ExperimentRow& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["setup"] = r.setup;
  d["mechanism"] = r.mechanism;
  d["alpha"] = r.alpha;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["lw_eq"] = r.lw_eq;
  d["lw_opt"] = r.lw_opt;
  d["poa"] = r.poa;
  d["gamma_achieved"] = r.gamma_achieved;
  return d;
}

py::dict summary_dict(const SummaryRow& r) {
  py::dict d;
  d["setup"] = r.setup;
  d["mechanism"] = r.mechanism;
  d["alpha"] = r.alpha;
  d["trials"] = r.trials;
  d["converged"] = r.converged;
  d["not_converged"] = r.not_converged;
  d["mean_poa"] = r.mean_poa;
  return d;
}

}  // namespace

PYBIND11_MODULE(_arena, m) {
  m.doc() = "Autobidding auction simulator";

  py::register_exception<Error>(m, "ArenaError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def(py::init([](const Rows& values, std::optional<std::vector<double>> targets) {
             Matrix v = Matrix::from_rows(values);
             return targets ? Instance(std::move(v), *targets) : Instance(std::move(v));
           }),
           py::arg("values"), py::arg("targets") = py::none())
      .def_property_readonly("values", [](const Instance& i) { return i.values().to_rows(); })
      .def_property_readonly("targets", &Instance::targets)
      .def_property_readonly("num_advertisers", &Instance::num_advertisers)
      .def_property_readonly("num_queries", &Instance::num_queries)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& i) {
        return "Instance(" + std::to_string(i.num_advertisers()) + "x" +
               std::to_string(i.num_queries()) + ")";
      });

  py::class_<BidProfile>(m, "BidProfile")
      .def(py::init([](const Rows& bids) { return BidProfile(Matrix::from_rows(bids)); }))
      .def_static("truthful", &BidProfile::truthful)
      .def_static("zeros", &BidProfile::zeros)
      .def_property_readonly("bids", [](const BidProfile& b) { return b.bids().to_rows(); })
      .def("__eq__", [](const BidProfile& a, const BidProfile& b) { return a == b; });

  py::class_<MechanismSpec>(m, "Mechanism")
      .def(py::init([](const std::string& name, double alpha) { return MechanismSpec::parse(name, alpha); }),
           py::arg("name"), py::arg("alpha") = 1.0)
      .def_static("spa", &MechanismSpec::spa)
      .def_static("fpa", &MechanismSpec::fpa)
      .def_static("rfpa", &MechanismSpec::rfpa)
      .def_static("rtruth", &MechanismSpec::rtruth)
      .def_readonly("alpha", &MechanismSpec::alpha)
      .def_property_readonly("kind", [](const MechanismSpec& s) { return to_string(s.kind); })
      .def_property_readonly("name", &MechanismSpec::name)
      .def("__repr__", &MechanismSpec::name);

  m.def("query_outcome", [](const MechanismSpec& mech, const std::vector<double>& bids) {
    const QueryOutcome q = query_outcome(mech, bids);
    return py::make_tuple(q.win_prob, q.expected_payment);
  }, "Win probabilities and expected payments for one query.");
  m.def("evaluate_profile", [](const Instance& inst, const BidProfile& bids, const MechanismSpec& mech) {
    return outcome_dict(evaluate_profile(inst, bids, mech));
  });
  m.def("liquid_welfare", [](const Instance& inst, const Rows& allocation) {
    return liquid_welfare(inst, Matrix::from_rows(allocation));
  });
  m.def("optimal_welfare", [](const Instance& inst) { return optimal_welfare(inst).welfare; });

  py::class_<BestResponse>(m, "BestResponse")
      .def_readonly("bids", &BestResponse::bids)
      .def_readonly("value", &BestResponse::value)
      .def_readonly("spend", &BestResponse::spend)
      .def_readonly("multiplier", &BestResponse::multiplier)
      .def_readonly("heuristic", &BestResponse::heuristic);
  m.def("best_response",
        [](const Instance& inst, std::size_t advertiser, const BidProfile& bids, const MechanismSpec& mech) {
          return dynamics_best_response(inst, advertiser, bids, mech, 0.0);
        },
        py::arg("instance"), py::arg("advertiser"), py::arg("bids"), py::arg("mechanism"));

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("bids", &EquilibriumReport::bids)
      .def_readonly("iterations", &EquilibriumReport::iterations)
      .def_readonly("converged", &EquilibriumReport::converged)
      .def_readonly("lw_eq", &EquilibriumReport::lw_eq)
      .def_readonly("lw_opt", &EquilibriumReport::lw_opt)
      .def_readonly("poa", &EquilibriumReport::poa)
      .def_readonly("gamma_achieved", &EquilibriumReport::gamma_achieved)
      .def_readonly("cycle_detected", &EquilibriumReport::cycle_detected)
      .def_readonly("diagnostics", &EquilibriumReport::diagnostics);
  m.def("run_dynamics",
        [](const Instance& inst, const MechanismSpec& mech, int max_rounds, double tol, std::uint64_t seed,
           bool scan_gamma) {
          DynamicsOptions o;
          o.max_rounds = max_rounds;
          o.tol = tol;
          o.seed = seed;
          o.scan_gamma = scan_gamma;
          py::gil_scoped_release release;
          return run_dynamics(inst, mech, o);
        },
        py::arg("instance"), py::arg("mechanism"), py::arg("max_rounds") = 500, py::arg("tol") = 1e-6,
        py::arg("seed") = 0, py::arg("scan_gamma") = true);

  py::class_<GammaEqCheck>(m, "GammaEqCheck")
      .def_readonly("gamma", &GammaEqCheck::gamma)
      .def_readonly("is_equilibrium", &GammaEqCheck::is_equilibrium)
      .def_readonly("ros_feasible", &GammaEqCheck::ros_feasible)
      .def_readonly("achieved_gamma", &GammaEqCheck::achieved_gamma);
  m.def("check_gamma_equilibrium",
        [](const Instance& inst, const MechanismSpec& mech, const BidProfile& bids, double gamma) {
          return check_gamma_equilibrium(inst, mech, bids, gamma);
        },
        py::arg("instance"), py::arg("mechanism"), py::arg("bids"), py::arg("gamma"));

  py::class_<BoundEvaluation>(m, "BoundEvaluation")
      .def_property_readonly("variant", [](const BoundEvaluation& e) { return to_string(e.variant); })
      .def_readonly("alpha", &BoundEvaluation::alpha)
      .def_readonly("gamma", &BoundEvaluation::gamma)
      .def_readonly("eta", &BoundEvaluation::eta)
      .def_readonly("term_eta_alpha", &BoundEvaluation::term_eta_alpha)
      .def_readonly("term_gamma", &BoundEvaluation::term_gamma)
      .def_readonly("g_curve", &BoundEvaluation::g_curve)
      .def_readonly("g_min", &BoundEvaluation::g_min)
      .def_readonly("beta_at_min", &BoundEvaluation::beta_at_min)
      .def_readonly("f", &BoundEvaluation::f_value);
  m.def("g",
        [](const std::string& variant, double alpha, double beta, double gamma, double eta) {
          return g_bound(parse_bound_variant(variant), alpha, beta, gamma, eta);
        },
        py::arg("variant"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("eta"));
  m.def("eval_f",
        [](double alpha, double gamma, const std::string& variant, int beta_points, const std::string& case1) {
          BoundOptions o;
          o.beta_points = beta_points;
          o.case1 = parse_case_one_term(case1);
          return eval_f(alpha, gamma, parse_bound_variant(variant), o);
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("variant") = "rfpa", py::arg("beta_points") = 4096,
        py::arg("case1") = "eta_spend");

  py::class_<BoundOptimum>(m, "BoundOptimum")
      .def_readonly("alpha", &BoundOptimum::alpha)
      .def_readonly("gamma", &BoundOptimum::gamma)
      .def_readonly("f", &BoundOptimum::f)
      .def_readonly("poa", &BoundOptimum::poa);
  m.def("optimize_f",
        [](const std::string& variant, double alpha_lo, double alpha_hi, int alpha_points, double gamma_step,
           const std::string& case1) {
          OptimizeOptions o;
          o.alpha_lo = alpha_lo;
          o.alpha_hi = alpha_hi;
          o.alpha_points = alpha_points;
          o.gamma_step = gamma_step;
          o.case1 = parse_case_one_term(case1);
          py::gil_scoped_release release;
          return optimize_f(parse_bound_variant(variant), o);
        },
        py::arg("variant"), py::arg("alpha_lo") = 1.01, py::arg("alpha_hi") = 4.0,
        py::arg("alpha_points") = 120, py::arg("gamma_step") = 1e-3, py::arg("case1") = "eta_spend");

  py::class_<LowerBoundInstance>(m, "LowerBoundInstance")
      .def_readonly("instance", &LowerBoundInstance::instance)
      .def_readonly("bids", &LowerBoundInstance::bids)
      .def_readonly("mechanism", &LowerBoundInstance::mechanism)
      .def_readonly("gamma", &LowerBoundInstance::gamma)
      .def_readonly("predicted_ratio", &LowerBoundInstance::predicted_ratio)
      .def_readonly("params", &LowerBoundInstance::params);
  m.def("rtruth_lb_ratio", &rtruth_lb_ratio, py::arg("alpha"));
  m.def("make_rtruth_lb_instance", &make_rtruth_lb_instance, py::arg("alpha"), py::arg("epsilon"));
  m.def("make_det_lb_instance",
        [](const std::string& kind, double b1, double b2, double epsilon, double gamma) {
          return make_det_lb_instance(parse_kind(kind), b1, b2, epsilon, gamma);
        },
        py::arg("kind"), py::arg("b1"), py::arg("b2"), py::arg("epsilon"), py::arg("gamma"));

  m.def("gen_instance",
        [](const std::string& setup, int queries, std::uint64_t seed, int trial) {
          Rng rng = trial_rng(seed, trial);
          return gen_instance(parse_setup(setup), queries, rng);
        },
        py::arg("setup"), py::arg("queries") = 50, py::arg("seed") = 0, py::arg("trial") = 0);
  m.def("default_alphas", &default_alphas);
  m.def("run_experiment",
        [](const std::string& setup, const std::vector<std::string>& mechanisms,
           std::optional<std::vector<double>> alphas, int trials, std::uint64_t seed, int queries,
           int threads) {
          ExperimentConfig c;
          c.setup = parse_setup(setup);
          c.mechanisms.clear();
          for (const std::string& name : mechanisms) c.mechanisms.push_back(parse_kind(name));
          if (alphas) c.alphas = *alphas;
          c.trials = trials;
          c.seed = seed;
          c.queries = queries;
          c.threads = threads;
          ExperimentResult res;
          {
            py::gil_scoped_release release;
            res = run_experiment(c);
          }
          py::list rows, summary;
          for (const ExperimentRow& r : res.rows) rows.append(row_dict(r));
          for (const SummaryRow& r : res.summary) summary.append(summary_dict(r));
          return py::make_tuple(rows, summary);
        },
        py::arg("setup"), py::arg("mechanisms") = std::vector<std::string>{"spa", "rfpa", "rtruth"},
        py::arg("alphas") = py::none(), py::arg("trials") = 20, py::arg("seed") = 0,
        py::arg("queries") = 50, py::arg("threads") = 0);
}
