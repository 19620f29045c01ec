#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "arena/bounds.hpp"
#include "arena/equilibrium.hpp"

using namespace arena;

namespace {

Instance random_instance(std::mt19937_64& rng, int queries) {
  std::uniform_real_distribution<double> d(0.3, 1.0);
  Matrix v(2, queries);
  for (int j = 0; j < queries; ++j) {
    v(0, j) = d(rng);
    v(1, j) = d(rng);
  }
  return Instance(v);
}

}  // namespace

TEST_CASE("SPA on one query reaches the efficient outcome") {
  const Instance inst(Matrix::from_rows({{1.0}, {0.9}}));
  const EquilibriumReport rep = run_dynamics(inst, MechanismSpec::spa());
  CHECK(rep.converged);
  CHECK(rep.poa == 1.0);
  CHECK(rep.gamma_achieved == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("rFPA on one query misallocates with the closed-form probability") {
  const Instance inst(Matrix::from_rows({{1.0}, {0.9}}));
  for (double alpha : {1.2, 1.4, 2.0}) {
    const EquilibriumReport rep = run_dynamics(inst, MechanismSpec::rfpa(alpha));
    REQUIRE(rep.converged);
    // Both bid their value; the low bidder wins with 1/2 (1 - ln(1/0.9) / ln alpha).
    const double miss = 0.5 * (1.0 - std::log(1.0 / 0.9) / std::log(alpha));
    CHECK(rep.lw_eq == doctest::Approx(1.0 - 0.1 * miss).epsilon(1e-6));
    CHECK(rep.poa == doctest::Approx(1.0 / (1.0 - 0.1 * miss)).epsilon(1e-6));
  }
}

TEST_CASE("converged dynamics respect ROS and report consistent welfare") {
  std::mt19937_64 rng(21);
  for (const MechanismSpec& mech :
       {MechanismSpec::spa(), MechanismSpec::rfpa(1.4), MechanismSpec::rtruth(1.4)}) {
    for (int t = 0; t < 5; ++t) {
      const Instance inst = random_instance(rng, 8);
      DynamicsOptions opt;
      opt.seed = static_cast<std::uint64_t>(t);
      const EquilibriumReport rep = run_dynamics(inst, mech, opt);
      if (!rep.converged) continue;
      for (const AdvertiserResult& a : rep.per_advertiser) CHECK(a.ros_slack >= -1e-9);
      const ProfileOutcome out = evaluate_profile(inst, rep.bids, mech);
      CHECK(rep.lw_eq == doctest::Approx(liquid_welfare(inst, out.allocation)));
      CHECK(rep.lw_opt == doctest::Approx(optimal_welfare(inst).welfare));
      CHECK(rep.poa >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("FPA equilibria keep at least half the optimal welfare") {
  std::mt19937_64 rng(22);
  int converged = 0;
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_instance(rng, 6);
    DynamicsOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    const EquilibriumReport rep = run_dynamics(inst, MechanismSpec::fpa(), opt);
    if (!rep.converged) {
      CHECK_FALSE(rep.diagnostics.empty());
      continue;
    }
    ++converged;
    CHECK(rep.lw_eq >= rep.lw_opt / 2 - 1e-6);
  }
  CHECK(converged > 0);
}

TEST_CASE("dynamics are deterministic") {
  std::mt19937_64 rng(23);
  const Instance inst = random_instance(rng, 10);
  const EquilibriumReport a = run_dynamics(inst, MechanismSpec::rtruth(1.4));
  const EquilibriumReport b = run_dynamics(inst, MechanismSpec::rtruth(1.4));
  CHECK(a.bids == b.bids);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("gamma check finds a profitable deviation") {
  // Advertiser 0 bids nothing although it could win at price 0.9.
  const Instance inst(Matrix::from_rows({{1.0}, {0.9}}));
  BidProfile bids(inst, Matrix::from_rows({{0.0}, {0.9}}));
  const GammaEqCheck check = check_gamma_equilibrium(inst, MechanismSpec::spa(), bids, 0.5);
  CHECK_FALSE(check.is_equilibrium);
  CHECK(std::isinf(check.achieved_gamma));
  REQUIRE(check.best_deviation);
  CHECK(check.best_deviation->advertiser == 0);
  CHECK(check.best_deviation->value == doctest::Approx(1.0));
}

TEST_CASE("gamma check measures a bounded improvement") {
  // SPA, advertiser 0 wins query 0 (value 1) but leaves query 1 (value 0.5,
  // price 0.3) although the slack would pay for it: ratio 1.5.
  const Instance inst(Matrix::from_rows({{1.0, 0.5}, {0.2, 0.3}}));
  BidProfile bids(inst, Matrix::from_rows({{1.0, 0.0}, {0.2, 0.3}}));
  const GammaEqCheck loose = check_gamma_equilibrium(inst, MechanismSpec::spa(), bids, 0.6);
  CHECK(loose.is_equilibrium);
  CHECK(loose.achieved_gamma == doctest::Approx(0.5));
  CHECK_FALSE(check_gamma_equilibrium(inst, MechanismSpec::spa(), bids, 0.4).is_equilibrium);
}

TEST_CASE("gamma check rejects ROS-infeasible bids") {
  const Instance inst(Matrix::from_rows({{0.5}, {0.9}}));
  BidProfile bids(inst, Matrix::from_rows({{1.0}, {0.9}}));
  const GammaEqCheck check = check_gamma_equilibrium(inst, MechanismSpec::fpa(), bids, 0.1);
  CHECK_FALSE(check.ros_feasible);
  CHECK_FALSE(check.is_equilibrium);
  CHECK_THROWS(check_gamma_equilibrium(inst, MechanismSpec::fpa(), bids, -0.1));
}

TEST_CASE("lower-bound instances are equilibria of their mechanisms") {
  for (const LowerBoundInstance& lb :
       {make_rtruth_lb_instance(1.4, 1e-3), make_rtruth_lb_instance(2.0, 1e-2),
        make_det_lb_instance(MechanismKind::kFpa, 1.0, 1e3, 1e-3, 1e-2),
        make_det_lb_instance(MechanismKind::kSpa, 1.0, 1e3, 1e-3, 1e-2)}) {
    const GammaEqCheck check = check_gamma_equilibrium(lb.instance, lb.mechanism, lb.bids, lb.gamma);
    CHECK(check.is_equilibrium);
    const ProfileOutcome out = evaluate_profile(lb.instance, lb.bids, lb.mechanism);
    const double measured =
        optimal_welfare(lb.instance).welfare / liquid_welfare(lb.instance, out.allocation);
    CHECK(measured == doctest::Approx(lb.predicted_ratio).epsilon(1e-6));
  }
}

TEST_CASE("poa helpers") {
  CHECK(poa_ratio(2.0, 1.0) == 2.0);
  CHECK(std::isinf(poa_ratio(1.0, 0.0)));
  EquilibriumReport r;
  r.lw_opt = 3.0;
  r.lw_eq = 2.0;
  CHECK(poa_of_report(r) == 1.5);
}

TEST_CASE("invalid options are rejected") {
  const Instance inst(Matrix::from_rows({{1.0}, {0.9}}));
  DynamicsOptions opt;
  opt.max_rounds = 0;
  CHECK_THROWS(run_dynamics(inst, MechanismSpec::spa(), opt));
  const Instance three(Matrix::from_rows({{1.0}, {0.9}, {0.5}}));
  CHECK_THROWS(run_dynamics(three, MechanismSpec::rfpa(1.4)));
}
