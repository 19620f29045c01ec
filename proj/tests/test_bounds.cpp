#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "arena/bounds.hpp"

using namespace arena;

namespace {

// The three summands of the rFPA g, each written out on its own.
double rfpa_summand_gamma(double a, double b, double gamma) {
  return gamma / 2 * (1 + std::log(b) / std::log(a));
}
double rfpa_summand_win(double a, double b, double eta) {
  return eta * (1 + std::log(b) / std::log(a)) / (2 * (1 + std::log(a) + std::log(b)));
}
double rfpa_summand_lose(double a, double b, double eta) {
  return eta * (1 - std::log(b) / std::log(a)) / (2 * b * (1 + std::log(a) + std::log(b)));
}
double rtruth_summand(double a, double b, double eta) {
  return eta * (1 - 1 / a) * (1 + 1 / b) / (2 * std::log(a));
}

}  // namespace

TEST_CASE("g for rFPA at the documented points") {
  CHECK(g_rfpa(1.4, 1.0, 0.56, 0.44) == doctest::Approx(0.609226).epsilon(1e-6));
  CHECK(g_rfpa(1.4, 1 / 1.4, 0.56, 0.44) == doctest::Approx(0.616).epsilon(1e-12));
  CHECK(g_rfpa(1.4, 0.9, 0.56, 0.44) == doctest::Approx(0.5758).epsilon(1e-4));
  for (double b : {1 / 1.4, 0.8, 0.9, 1.0, 1.2, 1.4}) {
    const double expected =
        rfpa_summand_gamma(1.4, b, 0.56) + rfpa_summand_win(1.4, b, 0.44) + rfpa_summand_lose(1.4, b, 0.44);
    CHECK(g_rfpa(1.4, b, 0.56, 0.44) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(g_rfpa(1.4, b, 0.56, 0.44) >= 1 / 1.8);
  }
}

TEST_CASE("g for rTruth at the documented points") {
  CHECK(rtruth_summand(1.4, 1.0, 0.472) == doctest::Approx(0.400796).epsilon(1e-6));
  CHECK(g_rtruth(1.4, 1.0, 0.528, 0.472) == doctest::Approx(0.664796).epsilon(1e-6));
  CHECK(g_rtruth(1.4, 1.4, 0.528, 0.472) - rtruth_summand(1.4, 1.4, 0.472) ==
        doctest::Approx(0.528));
  CHECK(g_rtruth(1.4, 1 / 1.4, 0.528, 0.472) - rtruth_summand(1.4, 1 / 1.4, 0.472) ==
        doctest::Approx(0.0));
}

TEST_CASE("g splits into gamma m2 plus eta s2") {
  for (double a : {1.1, 1.4, 2.5}) {
    for (double b : {1 / a, 1.0, a}) {
      CHECK(bound_m2(a, b) == doctest::Approx(rfpa_summand_gamma(a, b, 1.0)));
      CHECK(bound_s2(BoundVariant::kRfpa, a, b) ==
            doctest::Approx(rfpa_summand_win(a, b, 1.0) + rfpa_summand_lose(a, b, 1.0)));
      CHECK(bound_s2(BoundVariant::kRtruth, a, b) == doctest::Approx(rtruth_summand(a, b, 1.0)));
    }
  }
}

TEST_CASE("g domain checks") {
  CHECK_THROWS(g_rfpa(1.0, 1.0, 0.5, 0.5));
  CHECK_THROWS(g_rfpa(1.4, 2.0, 0.5, 0.5));
  CHECK_THROWS(g_rfpa(1.4, 0.5, 0.5, 0.5));
  CHECK_THROWS(g_rfpa(1.4, 1.0, 0.6, 0.5));
  CHECK_THROWS(g_rtruth(1.4, 1.0, -0.1, 1.1));
}

TEST_CASE("f at alpha 1.4 and gamma 0.56") {
  const BoundEvaluation ev = eval_f(1.4, 0.56, BoundVariant::kRfpa);
  CHECK(ev.f_value >= 1 / 1.8 - 1e-6);
  CHECK(ev.term_eta_alpha == doctest::Approx(0.616).epsilon(1e-12));
  CHECK(ev.term_gamma == 0.56);
  CHECK(ev.g_min >= 1 / 1.8);
  CHECK(ev.g_curve.size() == 4096);
  CHECK(ev.g_curve.front().first == doctest::Approx(1 / 1.4));
  CHECK(ev.g_curve.back().first == doctest::Approx(1.4));
  // The refined minimum is not above any grid sample.
  for (const auto& [b, g] : ev.g_curve) CHECK(ev.g_min <= g + 1e-15);
}

TEST_CASE("degenerate weights give zero") {
  CHECK(eval_f(1.4, 1.0, BoundVariant::kRfpa).f_value == 0.0);
  CHECK(eval_f(1.4, 0.0, BoundVariant::kRfpa).f_value == 0.0);
}

TEST_CASE("f is stable under doubling the beta grid") {
  for (BoundVariant v : {BoundVariant::kRfpa, BoundVariant::kRtruth}) {
    for (double a : {1.2, 1.4, 2.0, 3.5}) {
      BoundOptions coarse;
      BoundOptions fine;
      fine.beta_points = 8192;
      CHECK(std::abs(eval_f(a, 0.55, v, coarse).f_value - eval_f(a, 0.55, v, fine).f_value) <= 1e-9);
    }
  }
  BoundOptions tiny;
  tiny.beta_points = 100;
  CHECK_THROWS(eval_f(1.4, 0.5, BoundVariant::kRfpa, tiny));
}

TEST_CASE("rTruth first term follows the chosen reading") {
  BoundOptions spend;
  BoundOptions literal;
  literal.case1 = CaseOneTerm::kEtaAlpha;
  const double a = 2.0;
  const BoundEvaluation s = eval_f(a, 0.5, BoundVariant::kRtruth, spend);
  const BoundEvaluation l = eval_f(a, 0.5, BoundVariant::kRtruth, literal);
  CHECK(s.term_eta_alpha == doctest::Approx(0.5 * (a - 1 / a) / (2 * std::log(a))));
  CHECK(l.term_eta_alpha == doctest::Approx(0.5 * a));
  CHECK(s.term_eta_spend == l.term_eta_spend);
  CHECK(s.term_eta_alpha_literal == l.term_eta_alpha_literal);
}

TEST_CASE("optimizing f") {
  OptimizeOptions fixed;
  fixed.alpha_lo = fixed.alpha_hi = 1.4;
  const BoundOptimum r = optimize_f(BoundVariant::kRfpa, fixed);
  CHECK(r.f >= 0.5555);
  CHECK(r.gamma == doctest::Approx(0.56).epsilon(0.02));
  CHECK(r.poa == doctest::Approx(1 / r.f));

  const BoundOptimum t = optimize_f(BoundVariant::kRtruth);
  CHECK(t.poa >= 1.88);
  CHECK(t.poa <= 1.91);
  CHECK(t.alpha > 1.0);

  OptimizeOptions bad;
  bad.alpha_lo = 0.5;
  CHECK_THROWS(optimize_f(BoundVariant::kRfpa, bad));
  OptimizeOptions coarse;
  coarse.gamma_step = 0.01;
  CHECK_THROWS(optimize_f(BoundVariant::kRfpa, coarse));
}

TEST_CASE("rFPA bound sweep is smallest near alpha 1.4") {
  OptimizeOptions sweep;
  sweep.alpha_lo = 1.05;
  sweep.alpha_hi = 2.0;
  sweep.alpha_points = 40;
  const BoundOptimum r = optimize_f(BoundVariant::kRfpa, sweep);
  CHECK(r.alpha == doctest::Approx(1.4).epsilon(0.05));
}

TEST_CASE("rTruth lower-bound ratio") {
  CHECK(rtruth_lb_ratio(1.4) == doctest::Approx(1.981376).epsilon(1e-6));
  CHECK(rtruth_lb_ratio(std::exp(1.0)) == doctest::Approx(1.850918).epsilon(1e-6));
  CHECK(std::abs(rtruth_lb_ratio(1 + 1e-6) - 2.0) < 1e-5);
  double prev = 3.0;
  for (double a = 1.05; a <= 3.0; a += 0.05) {
    const double r = rtruth_lb_ratio(a);
    CHECK(r > 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS(rtruth_lb_ratio(1.0));
}

TEST_CASE("rTruth lower-bound instance") {
  const LowerBoundInstance lb = make_rtruth_lb_instance(1.4, 1e-3);
  const double s = (1.4 - 1 / 1.4) / (2 * std::log(1.4));
  CHECK(s == doctest::Approx(1.018976).epsilon(1e-6));
  CHECK(lb.instance.value(1, 1) == doctest::Approx(0.981376).epsilon(1e-6));
  CHECK(lb.predicted_ratio == doctest::Approx(1.979398).epsilon(1e-6));
  CHECK(lb.mechanism.kind == MechanismKind::kRtruth);
  CHECK(lb.bids.bid(0, 0) / lb.instance.value(0, 0) ==
        doctest::Approx(lb.bids.bid(0, 1) / lb.instance.value(0, 1)));
  CHECK(make_rtruth_lb_instance(1.4, 1e-9).predicted_ratio == doctest::Approx(rtruth_lb_ratio(1.4)));
  CHECK_THROWS(make_rtruth_lb_instance(1.4, 0.0));
  CHECK_THROWS(make_rtruth_lb_instance(1.4, 1.0));
  CHECK_THROWS(make_rtruth_lb_instance(5.0 / 9.0, 1e-3));
}

TEST_CASE("deterministic lower-bound instance") {
  const LowerBoundInstance fpa = make_det_lb_instance(MechanismKind::kFpa, 1, 1000, 1e-3, 0.01);
  CHECK(fpa.predicted_ratio == doctest::Approx((2001 - 0.001) / 1001.001).epsilon(1e-12));
  const LowerBoundInstance spa = make_det_lb_instance(MechanismKind::kSpa, 1, 1000, 1e-3, 0.01);
  CHECK(spa.instance.value(0, 0) == 1000.0);
  CHECK(spa.instance.value(0, 1) == 0.0);
  CHECK(spa.instance.value(1, 1) == doctest::Approx(1000 - 1e-3));
  double prev = 1.0;
  for (double b2 : {1e2, 1e3, 1e4}) {
    const double r = make_det_lb_instance(MechanismKind::kFpa, 1, b2, 1e-3, 0.01).predicted_ratio;
    CHECK(r > prev);
    CHECK(r < 2.0);
    prev = r;
  }
  CHECK_THROWS(make_det_lb_instance(MechanismKind::kFpa, 1, 1000, 0.02, 0.01));
  CHECK_THROWS(make_det_lb_instance(MechanismKind::kFpa, 2, 1, 1e-3, 0.01));
  CHECK_THROWS(make_det_lb_instance(MechanismKind::kRfpa, 1, 1000, 1e-3, 0.01));
}

TEST_CASE("bound curve CSV") {
  std::ostringstream out;
  BoundOptions o;
  o.beta_points = 1000;
  write_bound_curve_csv(out, {eval_f(1.4, 0.56, BoundVariant::kRfpa, o)});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha,gamma,beta,g,term_eta_alpha,term_gamma,f");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1000);
}
