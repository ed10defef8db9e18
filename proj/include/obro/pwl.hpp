#pragma once

// Piecewise-linear representation of scalar functions over a partition of an
// interval, together with the distance, deviation and neighborhood tests used
// by the robust model.

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace obro {

/// Ordered sample coordinates x[0] < x[1] < ... < x[N-1], N >= 2.
class Partition {
 public:
  explicit Partition(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  double operator[](std::size_t p) const { return points_[p]; }
  std::size_t size() const { return points_.size(); }
  std::size_t segments() const { return points_.size() - 1; }
  double lower() const { return points_.front(); }
  double upper() const { return points_.back(); }
  double length() const { return upper() - lower(); }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<double> points_;
};

struct EvenScheme {
  double step = 0.0;
};

struct SubintervalStep {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

/// Even steps per subinterval; subintervals must tile [lo, hi] in order.
struct HeterogeneousScheme {
  std::vector<SubintervalStep> pieces;
};

using SegmentationScheme = std::variant<EvenScheme, HeterogeneousScheme>;

/// Builds a partition of [lo, hi]. With an even step h the points are
/// lo, lo + h, ... and the last point is hi (the final segment may be short).
Partition make_partition(double lo, double hi, const SegmentationScheme& scheme);

/// Segment index (0-based) and the two interpolation weights of x.
struct InterpCoefficients {
  std::size_t segment = 0;
  double alpha_lo = 1.0;
  double alpha_hi = 0.0;
};

/// x must lie in [lower, upper]; coordinates outside by less than
/// kRangeSlack * max(1, length) are clamped. An interior sample point belongs
/// to the segment on its left (alpha_hi = 1).
InterpCoefficients interp_coefficients(const Partition& part, double x);

inline constexpr double kRangeSlack = 1e-9;

class SampledFunction {
 public:
  SampledFunction(Partition partition, std::vector<double> values);

  const Partition& partition() const { return partition_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t p) const { return values_[p]; }
  std::size_t size() const { return values_.size(); }

  bool operator==(const SampledFunction&) const = default;

 private:
  Partition partition_;
  std::vector<double> values_;
};

double interpolate(const SampledFunction& f, double x);

/// max_p |f[p] - g[p]|; both functions must share a partition.
double sup_distance(const SampledFunction& f, const SampledFunction& g);

/// Trapezoidal integral of |f - ref| over the sample points.
double trapezoid_deviation(const SampledFunction& f, const SampledFunction& ref);

/// Admissible set around a reference function: sup radius, total deviation
/// budget and the adjacent rate-of-change ratio.
struct NeighborhoodSpec {
  SampledFunction reference;
  double delta_max = 0.0;
  double dev_max = 0.0;
  double lip_ratio = 2.0;
};

/// Throws InvalidInput if a bound is negative or lip_ratio <= 1.
void validate_spec(const NeighborhoodSpec& spec);

inline constexpr double kMembershipTolerance = 1e-9;

struct MembershipReport {
  bool sup_ok = true;
  bool deviation_ok = true;
  bool ratio_ok = true;
  // Amount by which each family exceeds its bound (0 when satisfied).
  double sup_violation = 0.0;
  double deviation_violation = 0.0;
  double ratio_violation = 0.0;
  // Only filled when requested: sample pairs (p, q), q > p + 1, that break the
  // ratio bound. Informational; membership is decided on adjacent pairs.
  std::vector<std::pair<std::size_t, std::size_t>> nonadjacent_flags;

  bool ok() const { return sup_ok && deviation_ok && ratio_ok; }
};

MembershipReport check_neighborhood(const SampledFunction& f, const NeighborhoodSpec& spec,
                                    double tol = kMembershipTolerance,
                                    bool diagnose_nonadjacent = false);

SampledFunction sample_reference(const std::function<double(double)>& fn, const Partition& part);

}  // namespace obro
