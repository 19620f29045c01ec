#include "arena/autobidder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace arena {

std::string to_string(BestResponseMethod method) {
  switch (method) {
    case BestResponseMethod::kUniformMultiplier: return "uniform-multiplier";
    case BestResponseMethod::kDualDecomposition: return "dual-decomposition";
    case BestResponseMethod::kKnapsackExact: return "knapsack-exact";
    case BestResponseMethod::kKnapsackDp: return "knapsack-dp";
    case BestResponseMethod::kKnapsackGreedy: return "knapsack-greedy";
    case BestResponseMethod::kGridOracle: return "grid-oracle";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Totals {
  double value = 0.0;
  double spend = 0.0;
};

/// Highest competing bid on each query and whether the advertiser would win
/// a tie at that bid.
struct Competition {
  std::vector<double> top;
  std::vector<bool> wins_ties;
};

Competition competition_for(const BidProfile& profile, std::size_t advertiser) {
  const std::size_t m = profile.num_queries();
  Competition c{std::vector<double>(m, 0.0), std::vector<bool>(m, true)};
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < profile.num_advertisers(); ++k) {
      if (k == advertiser) continue;
      c.top[j] = std::max(c.top[j], profile.bid(k, j));
    }
    for (std::size_t k = 0; k < advertiser; ++k) {
      if (profile.bid(k, j) == c.top[j]) c.wins_ties[j] = false;
    }
  }
  return c;
}

/// Value and spend of `advertiser` when it submits `row` against the others.
class RowEvaluator {
 public:
  RowEvaluator(const Instance& instance, std::size_t advertiser, const BidProfile& profile,
               const MechanismSpec& mechanism)
      : instance_(instance),
        advertiser_(advertiser),
        profile_(profile),
        mechanism_(mechanism.effective()),
        column_(profile.num_advertisers()) {}

  Totals operator()(std::span<const double> row) {
    Totals t;
    for (std::size_t j = 0; j < instance_.num_queries(); ++j) {
      for (std::size_t k = 0; k < column_.size(); ++k) column_[k] = profile_.bid(k, j);
      column_[advertiser_] = row[j];
      const QueryOutcome q = query_outcome(mechanism_, column_);
      t.value += q.win_prob[advertiser_] * instance_.value(advertiser_, j);
      t.spend += q.expected_payment[advertiser_];
    }
    return t;
  }

 private:
  const Instance& instance_;
  std::size_t advertiser_;
  const BidProfile& profile_;
  MechanismSpec mechanism_;
  std::vector<double> column_;
};

void check_advertiser(const Instance& instance, std::size_t advertiser, const BidProfile& profile) {
  if (!profile.matches(instance)) throw ShapeMismatch("bid profile shape does not match instance");
  if (advertiser >= instance.num_advertisers()) throw Error("advertiser index out of range");
}

BestResponse finish(const Instance& instance, std::size_t advertiser, const BidProfile& profile,
                    const MechanismSpec& mechanism, std::vector<double> bids,
                    BestResponseMethod method, double multiplier, bool heuristic = false) {
  RowEvaluator eval(instance, advertiser, profile, mechanism);
  const Totals t = eval(bids);
  return {std::move(bids), t.value, t.spend, method, multiplier, heuristic};
}

}  // namespace

BestResponse uniform_best_response(const Instance& instance, std::size_t advertiser,
                                   const BidProfile& profile, const MechanismSpec& mechanism) {
  check_advertiser(instance, advertiser, profile);
  const MechanismSpec mech = mechanism.effective();
  if (!mech.truthful()) throw Error("uniform bidding is only a best response in truthful auctions");
  mech.validate(instance.num_advertisers());

  const auto values = instance.values().row(advertiser);
  const double target = instance.target(advertiser);
  const Competition comp = competition_for(profile, advertiser);
  RowEvaluator eval(instance, advertiser, profile, mech);
  std::vector<double> row(values.size());

  auto at = [&](double c) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = c * values[j];
    return eval(row);
  };
  auto feasible = [&](const Totals& t) { return t.spend <= target * t.value; };

  if (!feasible(at(1.0))) {
    // Usually a rounding artefact at a boundary ratio. Take the largest
    // feasible grid multiplier with the best value, then push it towards 1.
    constexpr int kSteps = 200;
    double best_c = 0.0;
    double best_value = 0.0;
    for (int k = 1; k < kSteps; ++k) {
      const double c = static_cast<double>(k) / kSteps;
      const Totals t = at(c);
      if (feasible(t) && t.value >= best_value - 1e-12 * (1.0 + best_value)) {
        best_value = std::max(best_value, t.value);
        best_c = c;
      }
    }
    const double want = best_value - 1e-12 * (1.0 + best_value);
    double lo = best_c;
    double hi = std::min(1.0, best_c + 1.0 / kSteps);
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Totals t = at(mid);
      (feasible(t) && t.value >= want ? lo : hi) = mid;
    }
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = lo * values[j];
    return finish(instance, advertiser, profile, mech, row, BestResponseMethod::kUniformMultiplier,
                  lo);
  }

  // Past `cap` every query with positive value is won outright, so nothing changes.
  const double reach = mech.kind == MechanismKind::kRtruth ? mech.alpha : 1.0;
  double cap = 1.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] > 0.0 && comp.top[j] > 0.0) cap = std::max(cap, reach * comp.top[j] / values[j]);
  }
  cap *= 1.0 + 1e-9;

  double c_hi = cap;
  if (!feasible(at(cap))) {
    double lo = 1.0;
    double hi = cap;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(at(mid)) ? lo : hi) = mid;
    }
    c_hi = lo;
  }

  // Value is monotone in c, so c_hi is a best response. Stay truthful when
  // raising the multiplier buys nothing.
  const double best_value = at(c_hi).value;
  const double c = at(1.0).value >= best_value - 1e-12 * (1.0 + best_value) ? 1.0 : c_hi;
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = c * values[j];
  return finish(instance, advertiser, profile, mech, row, BestResponseMethod::kUniformMultiplier, c);
}

namespace {

/// Bid that makes the shared allocation give probability `prob` against `other`.
double rfpa_bid_for(double prob, double other, double alpha) {
  if (prob <= 0.0) return other / alpha;
  if (prob >= 1.0) return other * alpha;
  return other * std::exp((2.0 * prob - 1.0) * std::log(alpha));
}

/// Per-query maximizer of  weight * prob * value - prob * bid(prob)  over
/// prob in [0, 1]. The objective is concave in prob. Its stationary point
/// satisfies  weight * value = bid * (1 + ln alpha + ln beta);  with
/// x = 1 + 2 prob ln alpha this is x * e^(x-1) = weight * value * alpha / other.
double rfpa_query_prob(double value, double other, double alpha, double weight) {
  if (value <= 0.0) return 0.0;
  if (other <= 0.0 || weight == kInf) return 1.0;
  const double log_alpha = std::log(alpha);
  const double x_max = 1.0 + 2.0 * log_alpha;
  const double log_k = std::log(weight) + std::log(value) + log_alpha - std::log(other);
  if (log_k <= 0.0) return 0.0;
  if (log_k >= x_max - 1.0 + std::log(x_max)) return 1.0;

  // Solve h(x) = x - 1 + ln x - log_k = 0 on (1, x_max). h is increasing and
  // concave, so Newton started left of the root climbs monotonically; the
  // bracket guards against round-off.
  double lo = 1.0;
  double hi = x_max;
  double x = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double h = x - 1.0 + std::log(x) - log_k;
    if (h < 0.0) lo = x; else hi = x;
    double next = x - h / (1.0 + 1.0 / x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * hi) {
      return std::clamp((next - 1.0) / (2.0 * log_alpha), 0.0, 1.0);
    }
    x = next;
  }
  throw NumericError("rFPA per-query stationarity solve did not converge (log_k=" +
                     format_double(log_k) + ")");
}

/// Tiny positive bid used when the opponent bids zero: it wins outright.
double zero_opponent_bid(double value) { return 1e-9 * value; }

struct DualState {
  std::vector<double> bids;
  double slack = 0.0;
};

}  // namespace

BestResponse rfpa_best_response(const Instance& instance, std::size_t advertiser,
                                const BidProfile& profile, double alpha) {
  check_advertiser(instance, advertiser, profile);
  if (instance.num_advertisers() != 2) throw Error("rFPA best response needs exactly two advertisers");
  if (!(alpha > 1.0)) throw Error("rFPA best response needs alpha > 1");

  const auto values = instance.values().row(advertiser);
  const double target = instance.target(advertiser);
  const auto other = profile.row(1 - advertiser);
  const std::size_t m = values.size();

  // `weight` is (1 + lambda T) / lambda; infinity is the unconstrained problem.
  auto solve = [&](double weight) {
    DualState s{std::vector<double>(m, 0.0), 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      if (other[j] <= 0.0) {
        s.bids[j] = values[j] > 0.0 ? zero_opponent_bid(values[j]) : 0.0;
        s.slack += target * values[j] - s.bids[j];
        continue;
      }
      const double p = rfpa_query_prob(values[j], other[j], alpha, weight);
      s.bids[j] = rfpa_bid_for(p, other[j], alpha);
      s.slack += p * (target * values[j] - s.bids[j]);
    }
    return s;
  };

  const MechanismSpec mech = MechanismSpec::rfpa(alpha);
  DualState free = solve(kInf);
  if (free.slack >= 0.0) {
    return finish(instance, advertiser, profile, mech, std::move(free.bids),
                  BestResponseMethod::kDualDecomposition, 0.0);
  }

  // Weight at which every valued query is already won outright.
  const double x_max = 1.0 + 2.0 * std::log(alpha);
  double w_hi = 2.0 * target;
  for (std::size_t j = 0; j < m; ++j) {
    if (values[j] > 0.0 && other[j] > 0.0) {
      w_hi = std::max(w_hi, x_max * alpha * other[j] / values[j]);
    }
  }
  w_hi *= 2.0;
  double w_lo = target;  // lambda -> infinity: every chosen query pays for itself

  DualState lo_state = solve(w_lo);
  if (lo_state.slack < 0.0) {
    // Only round-off can get here; nothing beats bidding out of every query.
    lo_state.slack = 0.0;
  }
  // Leftover slack is spent on queries whose win probability may be tiny,
  // so it has to be small relative to the total value, not just absolutely.
  double total_value = 0.0;
  for (std::size_t j = 0; j < m; ++j) total_value += target * values[j];
  const double slack_goal = 1e-13 * (1.0 + total_value);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const double w_mid = std::sqrt(w_lo * w_hi);
    DualState mid = solve(w_mid);
    if (mid.slack >= 0.0) {
      w_lo = w_mid;
      lo_state = std::move(mid);
      if (lo_state.slack <= slack_goal) {
        converged = true;
        break;
      }
    } else {
      w_hi = w_mid;
    }
    if (w_hi - w_lo <= 1e-12 * w_hi) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericError("rFPA dual bisection did not converge: weight in [" + format_double(w_lo) +
                       ", " + format_double(w_hi) + "], slack " + format_double(lo_state.slack));
  }
  const double lambda = 1.0 / std::max(w_lo - target, std::numeric_limits<double>::min());
  return finish(instance, advertiser, profile, mech, std::move(lo_state.bids),
                BestResponseMethod::kDualDecomposition, lambda);
}

namespace {

struct SubsetChoice {
  std::vector<bool> take;
  BestResponseMethod method = BestResponseMethod::kKnapsackExact;
  bool heuristic = false;
};

constexpr std::size_t kExactLimit = 20;
constexpr double kDpUnit = 1e-4;
constexpr std::int64_t kDpMaxUnits = 2'000'000;

// Subset of items maximizing total value with total weight <= capacity.
// All weights are positive.
SubsetChoice choose_subset(const std::vector<double>& weight, const std::vector<double>& value,
                           double capacity, SubsetSolver solver) {
  const std::size_t k = weight.size();
  SubsetChoice out{std::vector<bool>(k, false)};
  if (k == 0) return out;

  std::int64_t total_units = 0;
  for (double v : value) total_units += std::llround(v / kDpUnit);

  if (solver == SubsetSolver::kAuto) {
    if (k <= kExactLimit) solver = SubsetSolver::kExact;
    else if (total_units <= kDpMaxUnits) solver = SubsetSolver::kDp;
    else solver = SubsetSolver::kGreedy;
  }

  if (solver == SubsetSolver::kExact) {
    if (k > 24) throw Error("exact subset enumeration limited to 24 items");
    const std::size_t masks = std::size_t{1} << k;
    std::vector<double> w(masks, 0.0);
    std::vector<double> v(masks, 0.0);
    std::size_t best = 0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      const std::size_t rest = mask & (mask - 1);
      w[mask] = w[rest] + weight[low];
      v[mask] = v[rest] + value[low];
      if (w[mask] <= capacity && (v[mask] > v[best] || (v[mask] == v[best] && w[mask] < w[best]))) {
        best = mask;
      }
    }
    for (std::size_t i = 0; i < k; ++i) out.take[i] = (best >> i) & 1U;
    out.method = BestResponseMethod::kKnapsackExact;
    return out;
  }

  if (solver == SubsetSolver::kDp) {
    // min weight reaching each discretized value level
    const std::size_t levels = static_cast<std::size_t>(total_units) + 1;
    std::vector<double> dp(levels, kInf);
    dp[0] = 0.0;
    std::vector<std::vector<bool>> used(k, std::vector<bool>(levels, false));
    std::size_t reach = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto u = static_cast<std::size_t>(std::llround(value[i] / kDpUnit));
      for (std::size_t level = reach + 1; level-- > 0;) {
        if (dp[level] == kInf) continue;
        const double cand = dp[level] + weight[i];
        if (cand < dp[level + u] && cand <= capacity) {
          dp[level + u] = cand;
          used[i][level + u] = true;
        }
      }
      reach += u;
    }
    std::size_t level = 0;
    for (std::size_t l = levels; l-- > 0;) {
      if (dp[l] <= capacity) {
        level = l;
        break;
      }
    }
    for (std::size_t i = k; i-- > 0 && level > 0;) {
      if (used[i][level]) {
        out.take[i] = true;
        level -= static_cast<std::size_t>(std::llround(value[i] / kDpUnit));
      }
    }
    out.method = BestResponseMethod::kKnapsackDp;
    return out;
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](std::size_t i) { return value[i] > 0.0 ? weight[i] / value[i] : kInf; };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio(a) < ratio(b); });
  double used_w = 0.0;
  for (std::size_t i : order) {
    if (value[i] > 0.0 && used_w + weight[i] <= capacity) {
      out.take[i] = true;
      used_w += weight[i];
    }
  }
  out.method = BestResponseMethod::kKnapsackGreedy;
  out.heuristic = true;
  return out;
}

/// Queries won at `price[j]`: those with price <= T v are free, the rest
/// compete for the surplus. Returns the won set and the leftover slack.
struct PricedSelection {
  std::vector<bool> win;
  double slack = 0.0;
  SubsetChoice choice;
};

PricedSelection select_priced(std::span<const double> values, double target,
                              const std::vector<double>& price, SubsetSolver solver) {
  const std::size_t m = values.size();
  PricedSelection sel{std::vector<bool>(m, false), 0.0, {}};
  std::vector<std::size_t> idx;
  std::vector<double> weight;
  std::vector<double> gain;
  double capacity = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (values[j] <= 0.0) continue;
    const double w = price[j] - target * values[j];
    if (w <= 0.0) {
      sel.win[j] = true;
      capacity -= w;
    } else {
      idx.push_back(j);
      weight.push_back(w);
      gain.push_back(values[j]);
    }
  }
  sel.choice = choose_subset(weight, gain, capacity, solver);
  sel.slack = capacity;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (sel.choice.take[i]) {
      sel.win[idx[i]] = true;
      sel.slack -= weight[i];
    }
  }
  return sel;
}

}  // namespace

BestResponse fpa_best_response(const Instance& instance, std::size_t advertiser,
                               const BidProfile& profile, double tick, SubsetSolver solver) {
  check_advertiser(instance, advertiser, profile);
  if (!(tick >= 0.0) || !std::isfinite(tick)) throw Error("FPA tick must be non-negative");
  const auto values = instance.values().row(advertiser);
  const double target = instance.target(advertiser);
  const Competition comp = competition_for(profile, advertiser);
  const std::size_t m = values.size();

  // tick == 0 means the smallest bid that wins and the largest that loses.
  std::vector<double> price(m);
  std::vector<double> losing(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double top = comp.top[j];
    if (tick > 0.0) {
      price[j] = top + tick;
      losing[j] = top - tick;
    } else if (comp.wins_ties[j]) {
      price[j] = top;
      losing[j] = top > 0.0 ? std::nextafter(top, 0.0) : 0.0;
    } else {
      price[j] = std::nextafter(top, kInf);
      losing[j] = top;
    }
  }
  const PricedSelection sel = select_priced(values, target, price, solver);

  std::vector<double> bids(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (sel.win[j]) {
      bids[j] = price[j];
    } else if (values[j] > 0.0) {
      const double afford = target * values[j] + std::max(sel.slack, 0.0);
      bids[j] = std::max(0.0, std::min(afford, losing[j]));
    }
  }
  return finish(instance, advertiser, profile, MechanismSpec::fpa(), std::move(bids),
                sel.choice.method, tick, sel.choice.heuristic);
}

BestResponse spa_knapsack_best_response(const Instance& instance, std::size_t advertiser,
                                        const BidProfile& profile, SubsetSolver solver) {
  check_advertiser(instance, advertiser, profile);
  const auto values = instance.values().row(advertiser);
  const Competition comp = competition_for(profile, advertiser);
  const PricedSelection sel =
      select_priced(values, instance.target(advertiser), comp.top, solver);
  std::vector<double> bids(values.size(), 0.0);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!sel.win[j]) continue;
    bids[j] = comp.wins_ties[j] ? comp.top[j] : std::nextafter(comp.top[j], kInf);
  }
  return finish(instance, advertiser, profile, MechanismSpec::spa(), std::move(bids),
                sel.choice.method, 1.0, sel.choice.heuristic);
}

BestResponse dynamics_best_response(const Instance& instance, std::size_t advertiser,
                                    const BidProfile& profile, const MechanismSpec& mechanism,
                                    double fpa_tick) {
  const MechanismSpec mech = mechanism.effective();
  switch (mech.kind) {
    case MechanismKind::kSpa:
    case MechanismKind::kRtruth: return uniform_best_response(instance, advertiser, profile, mech);
    case MechanismKind::kFpa: return fpa_best_response(instance, advertiser, profile, fpa_tick);
    case MechanismKind::kRfpa: return rfpa_best_response(instance, advertiser, profile, mech.alpha);
  }
  throw Error("unknown mechanism");
}

BestResponse exact_best_response(const Instance& instance, std::size_t advertiser,
                                 const BidProfile& profile, const MechanismSpec& mechanism,
                                 double fpa_tick) {
  const MechanismSpec mech = mechanism.effective();
  switch (mech.kind) {
    case MechanismKind::kSpa: return spa_knapsack_best_response(instance, advertiser, profile);
    case MechanismKind::kRtruth: return uniform_best_response(instance, advertiser, profile, mech);
    case MechanismKind::kFpa: return fpa_best_response(instance, advertiser, profile, fpa_tick);
    case MechanismKind::kRfpa: return rfpa_best_response(instance, advertiser, profile, mech.alpha);
  }
  throw Error("unknown mechanism");
}

UndominatedReport check_undominated(const Instance& instance, const BidProfile& profile,
                                    const MechanismSpec& mechanism, UndominatedGrid grid) {
  if (grid.points < 2) throw Error("undominated scan needs at least two grid points");
  const MechanismSpec mech = mechanism.effective();
  mech.validate(instance.num_advertisers());
  const ProfileOutcome base = evaluate_profile(instance, profile, mech);
  const std::size_t n = instance.num_advertisers();
  for (std::size_t i = 0; i < n; ++i) {
    if (instance.target(i) * base.value[i] - base.spend[i] < -grid.slack_tol) {
      throw OraclePrecondition("input bids violate ROS for advertiser " + std::to_string(i));
    }
  }

  const double reach = mech.randomized() ? mech.alpha : 1.0;
  UndominatedReport report;
  report.grid = grid;
  std::vector<double> column(n);
  std::vector<double> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const Competition comp = competition_for(profile, i);
    const double floor =
        std::min(0.0, instance.target(i) * base.value[i] - base.spend[i]) - grid.deviation_slack_tol;
    for (std::size_t j = 0; j < instance.num_queries(); ++j) {
      const double v = instance.value(i, j);
      const double top = comp.top[j];
      double lo, hi;
      if (top > 0.0) {
        lo = top / reach * 0.5;
        hi = top * reach * 2.0;
      } else {
        const double scale = std::max({v, profile.bid(i, j), instance.max_value(), 1e-12});
        lo = 1e-9 * scale;
        hi = 2.0 * scale;
      }
      candidates.assign({0.0, v, top / reach, top * reach, std::nextafter(top, kInf)});
      const double step = std::log(hi / lo) / (grid.points - 1);
      for (int k = 0; k < grid.points; ++k) candidates.push_back(lo * std::exp(step * k));

      std::optional<UndominatedViolation> worst;
      for (double b : candidates) {
        for (std::size_t k = 0; k < n; ++k) column[k] = profile.bid(k, j);
        column[i] = b;
        const QueryOutcome q = query_outcome(mech, column);
        const double gain = (q.win_prob[i] - base.allocation(i, j)) * v;
        if (gain <= grid.value_tol) continue;
        const double new_value = base.value[i] + gain;
        const double new_spend = base.spend[i] - base.payment(i, j) + q.expected_payment[i];
        if (instance.target(i) * new_value - new_spend < floor) continue;
        if (!worst || gain > worst->value_gain) {
          worst = UndominatedViolation{i, j, profile.bid(i, j), b, gain};
        }
      }
      if (worst) report.violations.push_back(*worst);
    }
  }
  report.ok = report.violations.empty();
  return report;
}

LemmaReport check_lemma_conditions(const Instance& instance, const BidProfile& profile,
                                   double alpha, double tol) {
  if (instance.num_advertisers() != 2) throw Error("lemma conditions apply to two advertisers");
  if (!(alpha > 1.0)) throw Error("lemma conditions need alpha > 1");
  if (!profile.matches(instance)) throw ShapeMismatch("bid profile shape does not match instance");
  const double log_alpha = std::log(alpha);
  LemmaReport report;
  for (std::size_t j = 0; j < instance.num_queries(); ++j) {
    const double b[2] = {profile.bid(0, j), profile.bid(1, j)};
    if (b[0] == 0.0 && b[1] == 0.0) continue;
    const QueryOutcome q = rfpa_outcome(b[0], b[1], alpha);
    // Bids within tol of the window edge count as outright wins: raising the
    // bid to the edge gains at most a tol-sized amount of win probability.
    auto outright = [&](std::size_t i) {
      return q.win_prob[i] >= 1.0 || b[i] + tol >= alpha * b[1 - i];
    };
    for (std::size_t i = 0; i < 2; ++i) {
      const std::size_t o = 1 - i;
      if (outright(i)) {
        const double bound = alpha * instance.value(o, j);
        if (b[i] < bound - tol) {
          report.flags.push_back({j, i, LemmaCondition::kOutrightWinBelowAlphaValue, b[i], bound});
        }
      } else if (q.win_prob[i] > 0.0 && !outright(o)) {
        const double log_beta = std::log(b[i]) - std::log(b[o]);
        const double bound = instance.value(i, j) / (1.0 + log_alpha + log_beta);
        if (b[i] < bound - tol) {
          report.flags.push_back({j, i, LemmaCondition::kSharedBidBelowDefectionBound, b[i], bound});
        }
      }
    }
  }
  report.ok = report.flags.empty();
  return report;
}

}  // namespace arena
