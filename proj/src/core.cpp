#include "arena/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arena {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw ShapeMismatch("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Instance::Instance(Matrix values, std::vector<double> targets)
    : values_(std::move(values)), targets_(std::move(targets)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw InvalidInstance("instance needs at least one advertiser and one query");
  }
  if (targets_.size() != values_.rows()) {
    throw InvalidInstance("expected one target per advertiser");
  }
  for (double t : targets_) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInstance("targets must be positive and finite");
  }
  for (double v : values_.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInstance("values must be non-negative and finite");
  }
}

Instance::Instance(Matrix values)
    : Instance(values, std::vector<double>(values.rows(), 1.0)) {}

double Instance::max_value() const {
  double m = 0.0;
  for (double v : values_.data()) m = std::max(m, v);
  return m;
}

bool Instance::is_normalized() const {
  return std::all_of(targets_.begin(), targets_.end(), [](double t) { return t == 1.0; });
}

BidProfile::BidProfile(Matrix bids) : bids_(std::move(bids)) {
  for (double b : bids_.data()) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error("bids must be non-negative and finite");
  }
}

BidProfile::BidProfile(const Instance& instance, Matrix bids) : BidProfile(std::move(bids)) {
  if (!matches(instance)) throw ShapeMismatch("bid profile shape does not match instance");
}

BidProfile BidProfile::zeros(const Instance& instance) {
  return BidProfile(Matrix(instance.num_advertisers(), instance.num_queries()));
}

BidProfile BidProfile::truthful(const Instance& instance) { return BidProfile(instance.values()); }

void BidProfile::set_row(std::size_t advertiser, std::span<const double> bids) {
  if (bids.size() != bids_.cols()) throw ShapeMismatch("bid row has wrong length");
  for (double b : bids) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error("bids must be non-negative and finite");
  }
  std::copy(bids.begin(), bids.end(), bids_.row(advertiser).begin());
}

bool BidProfile::matches(const Instance& instance) const {
  return bids_.rows() == instance.num_advertisers() && bids_.cols() == instance.num_queries();
}

double BidProfile::max_abs_diff(const BidProfile& other) const {
  if (other.bids_.rows() != bids_.rows() || other.bids_.cols() != bids_.cols()) {
    throw ShapeMismatch("profiles differ in shape");
  }
  double d = 0.0;
  auto a = bids_.data();
  auto b = other.bids_.data();
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

Instance normalize(const Instance& instance) {
  Matrix v = instance.values();
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (double& x : v.row(i)) x *= instance.target(i);
  }
  return Instance(std::move(v));
}

double liquid_welfare(const Instance& instance, const Matrix& allocation) {
  if (allocation.rows() != instance.num_advertisers() ||
      allocation.cols() != instance.num_queries()) {
    throw ShapeMismatch("allocation shape does not match instance");
  }
  double lw = 0.0;
  for (std::size_t i = 0; i < allocation.rows(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < allocation.cols(); ++j) v += allocation(i, j) * instance.value(i, j);
    lw += instance.target(i) * v;
  }
  return lw;
}

OptimalAllocation optimal_welfare(const Instance& instance) {
  OptimalAllocation opt;
  opt.allocation = Matrix(instance.num_advertisers(), instance.num_queries());
  opt.winner.resize(instance.num_queries());
  for (std::size_t j = 0; j < instance.num_queries(); ++j) {
    std::size_t best = 0;
    double best_w = instance.target(0) * instance.value(0, j);
    for (std::size_t i = 1; i < instance.num_advertisers(); ++i) {
      double w = instance.target(i) * instance.value(i, j);
      if (w > best_w) {
        best = i;
        best_w = w;
      }
    }
    opt.winner[j] = best;
    opt.allocation(best, j) = 1.0;
    opt.welfare += best_w;
  }
  return opt;
}

std::vector<double> ros_slack(const Instance& instance, std::span<const double> value,
                              std::span<const double> spend) {
  if (value.size() != instance.num_advertisers() || spend.size() != instance.num_advertisers()) {
    throw ShapeMismatch("need one value and one spend per advertiser");
  }
  std::vector<double> slack(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    slack[i] = instance.target(i) * value[i] - spend[i];
  }
  return slack;
}

bool ros_satisfied(double slack, double tol) { return slack >= -tol; }

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_instance(std::ostream& out, const Instance& instance) {
  out << "advertisers=" << instance.num_advertisers() << " queries=" << instance.num_queries()
      << '\n';
  for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
    out << "target " << i << ' ' << format_double(instance.target(i)) << '\n';
  }
  for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
    for (std::size_t j = 0; j < instance.num_queries(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(instance.value(i, j));
    }
    out << '\n';
  }
}

namespace {

std::size_t parse_header_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw InvalidInstance("expected '" + prefix + "' in header");
  try {
    long long n = std::stoll(token.substr(prefix.size()));
    if (n <= 0) throw InvalidInstance(key + " must be positive");
    return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw InvalidInstance("malformed header field '" + token + "'");
  }
}

}  // namespace

Instance read_instance(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInstance("empty instance file");
  std::istringstream header(line);
  std::string a, q;
  header >> a >> q;
  const std::size_t n = parse_header_field(a, "advertisers");
  const std::size_t m = parse_header_field(q, "queries");

  std::vector<double> targets(n, 0.0);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::string word;
    std::size_t idx = 0;
    double t = 0.0;
    if (!(in >> word >> idx >> t) || word != "target") throw InvalidInstance("malformed target line");
    if (idx >= n || seen[idx]) throw InvalidInstance("bad or duplicate target index");
    seen[idx] = true;
    targets[idx] = t;
  }
  Matrix values(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(in >> values(i, j))) throw InvalidInstance("too few values");
    }
  }
  std::string extra;
  if (in >> extra) throw InvalidInstance("trailing data after values");
  return Instance(std::move(values), std::move(targets));
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  return read_instance(in);
}

void save_instance(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file: " + path);
  write_instance(out, instance);
}

}  // namespace arena
