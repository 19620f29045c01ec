#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arena/core.hpp"

namespace arena {

class AmbiguousOutcome : public Error {
 public:
  using Error::Error;
};

class OraclePrecondition : public Error {
 public:
  using Error::Error;
};

enum class MechanismKind { kSpa, kFpa, kRfpa, kRtruth };

/// The only tie rule implemented: ties on the top bid go to the lowest index.
enum class TieBreak { kLowestIndex };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kSpa;
  /// Randomization width; only meaningful for rFPA/rTruth.
  double alpha = 1.0;
  TieBreak tie_break = TieBreak::kLowestIndex;

  static MechanismSpec spa() { return {MechanismKind::kSpa, 1.0}; }
  static MechanismSpec fpa() { return {MechanismKind::kFpa, 1.0}; }
  static MechanismSpec rfpa(double alpha) { return {MechanismKind::kRfpa, alpha}; }
  static MechanismSpec rtruth(double alpha) { return {MechanismKind::kRtruth, alpha}; }
  /// Accepts "spa", "fpa", "rfpa", "rtruth" (case-insensitive).
  static MechanismSpec parse(const std::string& name, double alpha = 1.0);

  bool randomized() const { return kind == MechanismKind::kRfpa || kind == MechanismKind::kRtruth; }
  bool truthful() const { return kind == MechanismKind::kSpa || kind == MechanismKind::kRtruth; }
  /// rFPA(1) is FPA and rTruth(1) is SPA; everything else maps to itself.
  MechanismSpec effective() const;
  std::string name() const;
  /// Throws Error when alpha < 1 or a two-bidder rule gets another count.
  void validate(std::size_t num_advertisers) const;
};

std::string to_string(MechanismKind kind);

/// Probability that bidder 1 wins under the shared rFPA/rTruth allocation.
/// Requires b1 + b2 > 0 and alpha > 1.
double randomized_win_prob(double b1, double b2, double alpha);

QueryOutcome spa_outcome(std::span<const double> bids);
QueryOutcome fpa_outcome(std::span<const double> bids);

/// Randomized first price: within a factor alpha the allocation interpolates
/// in log-bid space; the winner pays its own bid. alpha == 1 is plain FPA.
/// Throws AmbiguousOutcome when both bids are zero.
QueryOutcome rfpa_outcome(double b1, double b2, double alpha);

/// Same allocation as rfpa_outcome with Myerson (truthful) expected payments.
QueryOutcome rtruth_outcome(double b1, double b2, double alpha);

/// Dispatches on the mechanism. The all-zero query of a randomized rule is
/// returned unallocated instead of throwing.
QueryOutcome query_outcome(const MechanismSpec& mechanism, std::span<const double> bids);

/// Myerson expected payment  b * pi(b) - integral_0^b pi(z) dz, computed with
/// adaptive Simpson quadrature to an absolute error of 1e-9. `other` is the
/// competing bid; it is used as an extra breakpoint for the quadrature.
/// Throws OraclePrecondition if the curve is not monotone on the sampling grid.
double myerson_price_numeric(const std::function<double(double)>& win_prob_curve, double bid,
                             double other);

/// Allocation, payments, and per-advertiser totals for a whole bid profile.
struct ProfileOutcome {
  Matrix allocation;
  Matrix payment;
  std::vector<double> value;
  std::vector<double> spend;
};

ProfileOutcome evaluate_profile(const Instance& instance, const BidProfile& bids,
                                const MechanismSpec& mechanism);

}  // namespace arena
