#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "arena/acceptance.hpp"
#include "arena/autobidder.hpp"

using namespace arena;

namespace {

struct Case {
  Instance instance;
  BidProfile profile;
};

Case random_case(std::mt19937_64& rng, int queries, double opp_lo, double opp_hi) {
  std::uniform_real_distribution<double> val(0.3, 1.0);
  std::uniform_real_distribution<double> opp(opp_lo, opp_hi);
  Matrix v(2, queries);
  Matrix b(2, queries);
  for (int j = 0; j < queries; ++j) {
    v(0, j) = val(rng);
    v(1, j) = val(rng);
    b(0, j) = v(0, j);
    b(1, j) = opp(rng);
  }
  Instance inst(v);
  BidProfile prof(inst, b);
  return {inst, prof};
}

// Best total value of advertiser 0 when query j costs price[j] and the
// spend must stay within the value: all 2^m subsets.
double subset_oracle(const std::vector<double>& value, const std::vector<double>& price) {
  const std::size_t m = value.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    double v = 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask >> j & 1) {
        v += value[j];
        s += price[j];
      }
    }
    if (s <= v + 1e-12) best = std::max(best, v);
  }
  return best;
}

// Best uniform multiplier for SPA: only thresholds o_j / v_j matter.
double uniform_spa_oracle(const std::vector<double>& value, const std::vector<double>& opp) {
  double best = 0.0;
  std::vector<double> cs{1.0};
  for (std::size_t j = 0; j < value.size(); ++j) cs.push_back(std::max(1.0, opp[j] / value[j]));
  for (double c : cs) {
    double v = 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < value.size(); ++j) {
      if (opp[j] / value[j] <= c) {  // advertiser 0 wins ties
        v += value[j];
        s += opp[j];
      }
    }
    if (s <= v + 1e-12) best = std::max(best, v);
  }
  return best;
}

std::vector<double> row(const BidProfile& p, std::size_t i) {
  return {p.row(i).begin(), p.row(i).end()};
}

}  // namespace

TEST_CASE("SPA uniform response matches the threshold oracle") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Case c = random_case(rng, 1 + t % 6, 0.1, 1.5);
    const BestResponse br = uniform_best_response(c.instance, 0, c.profile, MechanismSpec::spa());
    const std::vector<double> v(c.instance.values().row(0).begin(), c.instance.values().row(0).end());
    CHECK(br.value == doctest::Approx(uniform_spa_oracle(v, row(c.profile, 1))).epsilon(1e-9));
    CHECK(br.spend <= br.value + 1e-12);
    CHECK(br.multiplier >= 1.0);
  }
}

TEST_CASE("uniform response stays truthful when overbidding buys nothing") {
  // Truthful already wins everything it can afford.
  const Instance inst(Matrix::from_rows({{1.0}, {0.9}}));
  const BestResponse br = uniform_best_response(inst, 0, BidProfile::truthful(inst), MechanismSpec::spa());
  CHECK(br.multiplier == 1.0);
  CHECK(br.bids[0] == 1.0);
  CHECK_THROWS(uniform_best_response(inst, 0, BidProfile::truthful(inst), MechanismSpec::fpa()));
}

TEST_CASE("SPA knapsack response matches subset enumeration") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    Case c = random_case(rng, 1 + t % 8, 0.1, 1.6);
    const BestResponse br = spa_knapsack_best_response(c.instance, 0, c.profile);
    const std::vector<double> v(c.instance.values().row(0).begin(), c.instance.values().row(0).end());
    CHECK(br.value == doctest::Approx(subset_oracle(v, row(c.profile, 1))).epsilon(1e-9));
    CHECK(br.value >= uniform_best_response(c.instance, 0, c.profile, MechanismSpec::spa()).value - 1e-12);
  }
}

TEST_CASE("FPA response matches subset enumeration at the exact overbid") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    Case c = random_case(rng, 1 + t % 8, 0.1, 1.6);
    const BestResponse br = fpa_best_response(c.instance, 0, c.profile, 0.0);
    const std::vector<double> v(c.instance.values().row(0).begin(), c.instance.values().row(0).end());
    // Advertiser 0 wins ties, so each query costs exactly the opponent's bid.
    CHECK(br.value == doctest::Approx(subset_oracle(v, row(c.profile, 1))).epsilon(1e-9));
    CHECK(br.spend <= br.value + 1e-12);
    const BestResponse dp = fpa_best_response(c.instance, 0, c.profile, 0.0, SubsetSolver::kDp);
    CHECK(dp.value >= br.value - 1e-3);
    const BestResponse greedy = fpa_best_response(c.instance, 0, c.profile, 0.0, SubsetSolver::kGreedy);
    CHECK(greedy.value <= br.value + 1e-12);
  }
}

TEST_CASE("FPA losing bids stay below the top bid") {
  const Instance inst(Matrix::from_rows({{0.3, 1.0}, {1.0, 0.2}}));
  const BidProfile prof = BidProfile::truthful(inst);
  const BestResponse br = fpa_best_response(inst, 1, prof, 0.0);
  const ProfileOutcome out = [&] {
    BidProfile p = prof;
    p.set_row(1, br.bids);
    return evaluate_profile(inst, p, MechanismSpec::fpa());
  }();
  CHECK(out.allocation(1, 0) == 1.0);  // pays just above 0.3
  CHECK(out.payment(1, 0) > 0.3);
  CHECK(out.allocation(1, 1) == 0.0);  // 1.0 is unaffordable for value 0.2
}

TEST_CASE("rFPA response matches the grid oracle on one to three queries") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 60; ++t) {
    const double alpha = t % 2 ? 1.4 : 2.0;
    Case c = random_case(rng, 1 + t % 3, 0.2, 1.5);
    const BestResponse br = rfpa_best_response(c.instance, 0, c.profile, alpha);
    const std::vector<double> v(c.instance.values().row(0).begin(), c.instance.values().row(0).end());
    const double oracle = rfpa_grid_oracle(v, row(c.profile, 1), 1.0, alpha, 1e-4);
    CHECK(br.value == doctest::Approx(oracle).epsilon(1e-3));
    CHECK(br.spend <= br.value + 1e-9);
  }
}

TEST_CASE("rFPA single query response bids the value when the window is binding") {
  // Alone, the best feasible bid spends exactly the value: b = v.
  const Instance inst(Matrix::from_rows({{0.6}, {0.9}}));
  BidProfile prof(inst, Matrix::from_rows({{0.6}, {0.8}}));
  const BestResponse br = rfpa_best_response(inst, 0, prof, 1.4);
  CHECK(br.bids[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(br.method == BestResponseMethod::kDualDecomposition);
}

TEST_CASE("rFPA wins outright when the slack allows it") {
  // Query 1 is won cheaply and funds query 0's outright price alpha * 1.0.
  const Instance inst(Matrix::from_rows({{1.0, 1.0}, {1.0, 0.01}}));
  BidProfile prof(inst, Matrix::from_rows({{1.0, 1.0}, {1.0, 0.01}}));
  const BestResponse br = rfpa_best_response(inst, 0, prof, 1.4);
  CHECK(br.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(br.bids[0] >= 1.4 * (1 - 1e-9));
  CHECK(br.bids[1] >= 0.014 * (1 - 1e-9));
  CHECK(br.spend <= 2.0);
}

TEST_CASE("undominated scan flags a free query left on the table") {
  const Instance inst(Matrix::from_rows({{1.0, 0.5}, {0.5, 0.5}}));
  BidProfile prof(inst, Matrix::from_rows({{1.0, 0.0}, {0.5, 0.2}}));
  const UndominatedReport rep = check_undominated(inst, prof, MechanismSpec::spa());
  REQUIRE_FALSE(rep.ok);
  bool found = false;
  for (const UndominatedViolation& v : rep.violations) {
    if (v.advertiser == 0 && v.query == 1) {
      found = true;
      CHECK(v.value_gain == doctest::Approx(0.5));
    }
  }
  CHECK(found);

  BidProfile broke(inst, Matrix::from_rows({{1.0, 0.0}, {2.0, 0.0}}));
  CHECK_THROWS_AS(check_undominated(inst, broke, MechanismSpec::spa()), OraclePrecondition);
}

TEST_CASE("lemma checks flag an outright win bid below alpha times the other value") {
  const Instance inst(Matrix::from_rows({{1.0}, {0.5}}));
  BidProfile low(inst, Matrix::from_rows({{0.6}, {0.1}}));
  const LemmaReport rep = check_lemma_conditions(inst, low, 1.4);
  REQUIRE(rep.flags.size() == 1);
  CHECK(rep.flags[0].condition == LemmaCondition::kOutrightWinBelowAlphaValue);
  CHECK(rep.flags[0].bound == doctest::Approx(0.7));

  // Shared query with a bid below v / (1 + ln alpha + ln beta).
  const Instance inst2(Matrix::from_rows({{1.0}, {0.5}}));
  BidProfile shared(inst2, Matrix::from_rows({{0.3}, {0.3}}));
  const LemmaReport rep2 = check_lemma_conditions(inst2, shared, 1.4);
  bool defection = false;
  for (const LemmaFlag& f : rep2.flags) {
    if (f.advertiser == 0) {
      defection = f.condition == LemmaCondition::kSharedBidBelowDefectionBound;
      CHECK(f.bound == doctest::Approx(1.0 / (1.0 + std::log(1.4))));
    }
  }
  CHECK(defection);
}

TEST_CASE("best response rejects bad inputs") {
  const Instance three(Matrix::from_rows({{1}, {1}, {1}}));
  CHECK_THROWS(rfpa_best_response(three, 0, BidProfile::truthful(three), 1.4));
  const Instance two(Matrix::from_rows({{1}, {1}}));
  CHECK_THROWS(rfpa_best_response(two, 0, BidProfile::truthful(two), 1.0));
  CHECK_THROWS(rfpa_best_response(two, 2, BidProfile::truthful(two), 1.4));
}
