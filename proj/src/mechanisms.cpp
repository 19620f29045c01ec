#include "arena/mechanisms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace arena {

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kSpa: return "spa";
    case MechanismKind::kFpa: return "fpa";
    case MechanismKind::kRfpa: return "rfpa";
    case MechanismKind::kRtruth: return "rtruth";
  }
  return "?";
}

MechanismSpec MechanismSpec::parse(const std::string& name, double alpha) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "spa") return spa();
  if (s == "fpa") return fpa();
  if (s == "rfpa") return rfpa(alpha);
  if (s == "rtruth") return rtruth(alpha);
  throw Error("unknown mechanism '" + name + "'");
}

MechanismSpec MechanismSpec::effective() const {
  if (kind == MechanismKind::kRfpa && alpha == 1.0) return fpa();
  if (kind == MechanismKind::kRtruth && alpha == 1.0) return spa();
  return *this;
}

std::string MechanismSpec::name() const {
  if (!randomized()) return to_string(kind);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", alpha);
  return to_string(kind) + "(" + buf + ")";
}

void MechanismSpec::validate(std::size_t num_advertisers) const {
  if (num_advertisers < 2) throw Error("mechanisms need at least two bidders");
  if (randomized()) {
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw Error("alpha must be >= 1");
    if (num_advertisers != 2) throw Error(name() + " is defined for exactly two bidders");
  }
}

double randomized_win_prob(double b1, double b2, double alpha) {
  if (b1 == 0.0 && b2 == 0.0) throw AmbiguousOutcome("both bids are zero");
  if (b2 == 0.0) return 1.0;
  if (b1 == 0.0) return 0.0;
  const double log_alpha = std::log(alpha);
  const double log_beta = std::log(b1) - std::log(b2);
  // Boundary |log beta| == log alpha stays on the interpolating branch.
  if (log_beta > log_alpha) return 1.0;
  if (log_beta < -log_alpha) return 0.0;
  return 0.5 * (1.0 + log_beta / log_alpha);
}

namespace {

std::size_t top_bidder(std::span<const double> bids) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < bids.size(); ++i) {
    if (bids[i] > bids[best]) best = i;
  }
  return best;
}

void require_two_or_more(std::span<const double> bids) {
  if (bids.size() < 2) throw Error("need at least two bids");
  for (double b : bids) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw Error("bids must be non-negative and finite");
  }
}

void require_pair(double b1, double b2, double alpha) {
  if (!(b1 >= 0.0) || !(b2 >= 0.0) || !std::isfinite(b1) || !std::isfinite(b2)) {
    throw Error("bids must be non-negative and finite");
  }
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw Error("alpha must be >= 1");
}

QueryOutcome single_winner(std::size_t n, std::size_t winner, double price) {
  QueryOutcome out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  out.win_prob[winner] = 1.0;
  out.expected_payment[winner] = price;
  return out;
}

}  // namespace

QueryOutcome spa_outcome(std::span<const double> bids) {
  require_two_or_more(bids);
  const std::size_t w = top_bidder(bids);
  double second = 0.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i != w) second = std::max(second, bids[i]);
  }
  return single_winner(bids.size(), w, second);
}

QueryOutcome fpa_outcome(std::span<const double> bids) {
  require_two_or_more(bids);
  const std::size_t w = top_bidder(bids);
  return single_winner(bids.size(), w, bids[w]);
}

QueryOutcome rfpa_outcome(double b1, double b2, double alpha) {
  require_pair(b1, b2, alpha);
  if (alpha == 1.0) {
    const double pair[2] = {b1, b2};
    return fpa_outcome(pair);
  }
  const double p1 = randomized_win_prob(b1, b2, alpha);
  const double p2 = 1.0 - p1;
  return {{p1, p2}, {p1 * b1, p2 * b2}};
}

QueryOutcome rtruth_outcome(double b1, double b2, double alpha) {
  require_pair(b1, b2, alpha);
  if (alpha == 1.0) {
    const double pair[2] = {b1, b2};
    return spa_outcome(pair);
  }
  const double p1 = randomized_win_prob(b1, b2, alpha);
  const double p2 = 1.0 - p1;
  const double two_log_alpha = 2.0 * std::log(alpha);
  const double inv_alpha = 1.0 / alpha;
  double c1 = 0.0;
  double c2 = 0.0;
  if (b1 > 0.0 && b2 > 0.0) {
    // Each side pays other * (min(ratio, alpha) - 1/alpha) / (2 ln alpha),
    // clamped at zero below the interpolation window.
    const double r1 = std::min(b1 / b2, alpha);
    const double r2 = std::min(b2 / b1, alpha);
    c1 = b2 * std::max(0.0, r1 - inv_alpha) / two_log_alpha;
    c2 = b1 * std::max(0.0, r2 - inv_alpha) / two_log_alpha;
  }
  if (p1 == 0.0) c1 = 0.0;
  if (p2 == 0.0) c2 = 0.0;
  return {{p1, p2}, {c1, c2}};
}

QueryOutcome query_outcome(const MechanismSpec& mechanism, std::span<const double> bids) {
  switch (mechanism.kind) {
    case MechanismKind::kSpa: return spa_outcome(bids);
    case MechanismKind::kFpa: return fpa_outcome(bids);
    case MechanismKind::kRfpa:
    case MechanismKind::kRtruth: {
      if (bids.size() != 2) throw Error(mechanism.name() + " is defined for exactly two bidders");
      if (bids[0] == 0.0 && bids[1] == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
      return mechanism.kind == MechanismKind::kRfpa ? rfpa_outcome(bids[0], bids[1], mechanism.alpha)
                                                    : rtruth_outcome(bids[0], bids[1], mechanism.alpha);
    }
  }
  throw Error("unknown mechanism");
}

namespace {

struct SimpsonSegment {
  double a, b, fa, fm, fb, whole;
};

double adaptive_simpson(const std::function<double(double)>& f, const SimpsonSegment& s,
                        double eps, int depth) {
  constexpr int kMaxDepth = 48;
  constexpr int kMinDepth = 5;
  const double m = 0.5 * (s.a + s.b);
  const double lm = 0.5 * (s.a + m);
  const double rm = 0.5 * (m + s.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
  const double right = (s.b - m) / 6.0 * (s.fm + 4.0 * frm + s.fb);
  const double delta = left + right - s.whole;
  if (depth >= kMaxDepth || (depth >= kMinDepth && std::abs(delta) <= 15.0 * eps)) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, {s.a, m, s.fa, flm, s.fm, left}, 0.5 * eps, depth + 1) +
         adaptive_simpson(f, {m, s.b, s.fm, frm, s.fb, right}, 0.5 * eps, depth + 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, {a, b, fa, fm, fb, whole}, eps, 0);
}

}  // namespace

double myerson_price_numeric(const std::function<double(double)>& win_prob_curve, double bid,
                             double other) {
  if (!(bid >= 0.0) || !(other >= 0.0)) throw OraclePrecondition("bids must be non-negative");
  if (bid == 0.0) return 0.0;

  constexpr int kGrid = 1024;
  double prev = win_prob_curve(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double p = win_prob_curve(bid * k / kGrid);
    if (p < prev - 1e-12) throw OraclePrecondition("win probability curve is not monotone");
    prev = p;
  }

  std::vector<double> cuts{0.0};
  if (other > 0.0 && other < bid) cuts.push_back(other);
  cuts.push_back(bid);
  const double eps = 1e-9 / static_cast<double>(cuts.size());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    area += integrate(win_prob_curve, cuts[k], cuts[k + 1], eps);
  }
  return bid * win_prob_curve(bid) - area;
}

ProfileOutcome evaluate_profile(const Instance& instance, const BidProfile& bids,
                                const MechanismSpec& mechanism) {
  if (!bids.matches(instance)) throw ShapeMismatch("bid profile shape does not match instance");
  const std::size_t n = instance.num_advertisers();
  const std::size_t m = instance.num_queries();
  const MechanismSpec mech = mechanism.effective();
  ProfileOutcome out{Matrix(n, m), Matrix(n, m), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0)};
  std::vector<double> column(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = bids.bid(i, j);
    const QueryOutcome q = query_outcome(mech, column);
    for (std::size_t i = 0; i < n; ++i) {
      out.allocation(i, j) = q.win_prob[i];
      out.payment(i, j) = q.expected_payment[i];
      out.value[i] += q.win_prob[i] * instance.value(i, j);
      out.spend[i] += q.expected_payment[i];
    }
  }
  return out;
}

}  // namespace arena
