#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace arena {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Dense row-major matrix. Rows are advertisers, columns are queries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// The game: per-advertiser, per-query values and per-advertiser ROS targets.
class Instance {
 public:
  /// Throws InvalidInstance on negative/non-finite values, non-positive
  /// targets, or an empty shape.
  Instance(Matrix values, std::vector<double> targets);
  /// All targets set to 1.
  explicit Instance(Matrix values);

  std::size_t num_advertisers() const { return values_.rows(); }
  std::size_t num_queries() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  double value(std::size_t advertiser, std::size_t query) const {
    return values_(advertiser, query);
  }
  const std::vector<double>& targets() const { return targets_; }
  double target(std::size_t advertiser) const { return targets_[advertiser]; }
  double max_value() const;
  bool is_normalized() const;

  bool operator==(const Instance&) const = default;

 private:
  Matrix values_;
  std::vector<double> targets_;
};

/// One bid per advertiser per query.
class BidProfile {
 public:
  BidProfile() = default;
  explicit BidProfile(Matrix bids);
  BidProfile(const Instance& instance, Matrix bids);

  static BidProfile zeros(const Instance& instance);
  /// Bids equal to values.
  static BidProfile truthful(const Instance& instance);

  const Matrix& bids() const { return bids_; }
  double bid(std::size_t advertiser, std::size_t query) const { return bids_(advertiser, query); }
  std::span<const double> row(std::size_t advertiser) const { return bids_.row(advertiser); }
  void set_row(std::size_t advertiser, std::span<const double> bids);

  std::size_t num_advertisers() const { return bids_.rows(); }
  std::size_t num_queries() const { return bids_.cols(); }

  bool matches(const Instance& instance) const;
  /// Sup-norm distance between two profiles of the same shape.
  double max_abs_diff(const BidProfile& other) const;

  bool operator==(const BidProfile&) const = default;

 private:
  Matrix bids_;
};

/// Per-query win probabilities and expected costs (price times win probability).
struct QueryOutcome {
  std::vector<double> win_prob;
  std::vector<double> expected_payment;
};

struct WelfareSummary {
  double lw_alloc = 0.0;
  double lw_opt = 0.0;
  std::vector<double> spend;
  std::vector<double> value;
};

struct OptimalAllocation {
  double welfare = 0.0;
  /// Winner per query (lowest index among the argmax).
  std::vector<std::size_t> winner;
  Matrix allocation;
};

/// Absolute tolerance for welfare and ROS comparisons on normalized instances.
inline constexpr double kWelfareTol = 1e-9;
/// Relative tolerance used for the large-magnitude lower-bound instances.
inline constexpr double kRelativeTol = 1e-7;

/// Replaces v_ij by T_i * v_ij and sets every target to 1.
Instance normalize(const Instance& instance);

/// Sum_i T_i Sum_j pi_ij v_ij. Throws ShapeMismatch.
double liquid_welfare(const Instance& instance, const Matrix& allocation);

/// Per-query argmax of T_i v_ij; single-slot queries make this the optimum.
OptimalAllocation optimal_welfare(const Instance& instance);

/// slack_i = T_i value_i - spend_i. Negative means the ROS constraint is violated.
std::vector<double> ros_slack(const Instance& instance, std::span<const double> value,
                              std::span<const double> spend);

bool ros_satisfied(double slack, double tol = kWelfareTol);

// Plain-text instance format:
//   advertisers=<n> queries=<m>
//   target <i> <T_i>          (n lines)
//   <v_i1> ... <v_im>         (n lines)
// Numbers are printed with 17 significant digits so a round trip is exact.
void write_instance(std::ostream& out, const Instance& instance);
Instance read_instance(std::istream& in);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& instance);

/// Shortest round-trip formatting shared by every text and CSV writer.
std::string format_double(double x);

}  // namespace arena
