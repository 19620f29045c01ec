#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "arena/core.hpp"

using namespace arena;

TEST_CASE("matrix rows round trip") {
  const Matrix m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 6);
  CHECK(m.to_rows() == std::vector<std::vector<double>>{{1, 2, 3}, {4, 5, 6}});
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), ShapeMismatch);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance(Matrix::from_rows({{1, -1}, {1, 1}})), InvalidInstance);
  CHECK_THROWS_AS(Instance(Matrix::from_rows({{1, NAN}, {1, 1}})), InvalidInstance);
  CHECK_THROWS_AS(Instance(Matrix::from_rows({{1}, {1}}), {1.0, 0.0}), InvalidInstance);
  CHECK_THROWS_AS(Instance(Matrix::from_rows({{1}, {1}}), {1.0}), InvalidInstance);
  CHECK_THROWS(Instance(Matrix()));
  const Instance ok(Matrix::from_rows({{1, 0.5}, {0.2, 0.9}}));
  CHECK(ok.is_normalized());
  CHECK(ok.max_value() == 1.0);
}

TEST_CASE("normalize folds targets into values") {
  const Instance inst(Matrix::from_rows({{1, 2}, {3, 4}}), {0.5, 2.0});
  const Instance n = normalize(inst);
  CHECK(n.is_normalized());
  CHECK(n.value(0, 1) == 1.0);
  CHECK(n.value(1, 0) == 6.0);
}

TEST_CASE("liquid welfare against a hand sum") {
  const Instance inst(Matrix::from_rows({{1, 0.01}, {0.01, 0.99}}), {2.0, 1.0});
  const Matrix alloc = Matrix::from_rows({{0.25, 1.0}, {0.75, 0.0}});
  const double expected = 2.0 * (0.25 * 1 + 1.0 * 0.01) + 1.0 * (0.75 * 0.01);
  CHECK(liquid_welfare(inst, alloc) == doctest::Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(liquid_welfare(inst, Matrix(2, 3)), ShapeMismatch);
}

TEST_CASE("optimal welfare picks per-query argmax with lowest index on ties") {
  const Instance inst(Matrix::from_rows({{1, 0.5, 0.3}, {0.9, 0.5, 0.8}}));
  const OptimalAllocation opt = optimal_welfare(inst);
  CHECK(opt.welfare == doctest::Approx(1 + 0.5 + 0.8));
  CHECK(opt.winner == std::vector<std::size_t>{0, 0, 1});
  CHECK(opt.allocation(0, 1) == 1.0);
  CHECK(opt.allocation(1, 1) == 0.0);
}

TEST_CASE("ros slack sign") {
  const Instance inst(Matrix::from_rows({{1}, {1}}), {1.0, 0.5});
  const std::vector<double> value{1.0, 1.0};
  const std::vector<double> spend{0.9, 0.6};
  const std::vector<double> slack = ros_slack(inst, value, spend);
  CHECK(slack[0] == doctest::Approx(0.1));
  CHECK(slack[1] == doctest::Approx(-0.1));
  CHECK(ros_satisfied(slack[0]));
  CHECK_FALSE(ros_satisfied(slack[1]));
  CHECK(ros_satisfied(-1e-12));
}

TEST_CASE("bid profile helpers") {
  const Instance inst(Matrix::from_rows({{1, 2}, {3, 4}}));
  BidProfile b = BidProfile::truthful(inst);
  CHECK(b.bids() == inst.values());
  CHECK(BidProfile::zeros(inst).max_abs_diff(b) == 4.0);
  const std::vector<double> row{0.5, 0.25};
  b.set_row(1, row);
  CHECK(b.bid(1, 1) == 0.25);
  CHECK_THROWS(b.set_row(0, std::vector<double>{1.0}));
  CHECK_THROWS(BidProfile(inst, Matrix::from_rows({{1, -1}, {1, 1}})));
  CHECK_THROWS_AS(BidProfile(inst, Matrix(3, 2)), ShapeMismatch);
}

TEST_CASE("instance text format is exact") {
  const Instance inst(Matrix::from_rows({{0.1, 1.0 / 3.0}, {2.0 / 7.0, 0.99}}), {1.0, 0.7});
  std::stringstream io;
  write_instance(io, inst);
  const Instance back = read_instance(io);
  CHECK(back == inst);
  std::stringstream bad("advertisers=2 queries=1\ntarget 0 1\n");
  CHECK_THROWS(read_instance(bad));
}

TEST_CASE("format_double round-trips with the fewest digits") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(1.05) == "1.05");
  CHECK(format_double(2.0) == "2");
}
