#include "obro/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obro/error.hpp"

namespace obro {

namespace {

void require_same_partition(const SampledFunction& f, const SampledFunction& g) {
  if (f.partition() != g.partition()) {
    throw InvalidInput("sampled functions are defined on different partitions");
  }
}

// Even grid lo, lo+h, ..., hi. A remainder shorter than a rounding error is
// merged into the last full step.
void append_even(std::vector<double>& out, double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidInput("segmentation step must be positive, got " + std::to_string(step));
  }
  const double span = hi - lo;
  const double ratio = span / step;
  const auto full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  const std::size_t first = out.empty() ? 0 : 1;
  for (std::size_t p = first; p <= full; ++p) {
    out.push_back(lo + static_cast<double>(p) * step);
  }
  if (hi - out.back() > 1e-9 * step) {
    out.push_back(hi);
  } else {
    out.back() = hi;
  }
}

}  // namespace

Partition::Partition(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidInput("a partition needs at least two points");
  }
  for (std::size_t p = 0; p < points_.size(); ++p) {
    if (!std::isfinite(points_[p])) {
      throw InvalidInput("partition point " + std::to_string(p) + " is not finite");
    }
    if (p > 0 && !(points_[p - 1] < points_[p])) {
      throw InvalidInput("partition points must be strictly increasing (at index " +
                         std::to_string(p) + ")");
    }
  }
}

Partition make_partition(double lo, double hi, const SegmentationScheme& scheme) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInput("partition range requires finite lo < hi");
  }
  std::vector<double> points;
  if (const auto* even = std::get_if<EvenScheme>(&scheme)) {
    append_even(points, lo, hi, even->step);
    return Partition(std::move(points));
  }

  const auto& pieces = std::get<HeterogeneousScheme>(scheme).pieces;
  if (pieces.empty()) {
    throw InvalidInput("heterogeneous scheme has no subintervals");
  }
  const double joint_tol = 1e-9 * (hi - lo);
  double cursor = lo;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& piece = pieces[k];
    if (!(piece.step > 0.0)) {
      throw InvalidInput("segmentation step must be positive in subinterval " + std::to_string(k));
    }
    if (!(piece.lo < piece.hi)) {
      throw InvalidInput("subinterval " + std::to_string(k) + " is empty");
    }
    if (std::abs(piece.lo - cursor) > joint_tol) {
      throw InvalidInput(piece.lo < cursor
                             ? "subinterval " + std::to_string(k) + " overlaps its predecessor"
                             : "gap before subinterval " + std::to_string(k));
    }
    const double piece_hi = k + 1 == pieces.size() ? hi : piece.hi;
    if (k + 1 == pieces.size() && std::abs(piece.hi - hi) > joint_tol) {
      throw InvalidInput("subintervals do not end at the range upper bound");
    }
    append_even(points, cursor, piece_hi, piece.step);
    cursor = piece_hi;
  }
  return Partition(std::move(points));
}

InterpCoefficients interp_coefficients(const Partition& part, double x) {
  const double slack = kRangeSlack * std::max(1.0, part.length());
  if (!(x >= part.lower() - slack && x <= part.upper() + slack)) {
    throw InvalidInput("coordinate " + std::to_string(x) + " outside partition range [" +
                       std::to_string(part.lower()) + ", " + std::to_string(part.upper()) + "]");
  }
  x = std::clamp(x, part.lower(), part.upper());
  const auto pts = part.points();
  const auto it = std::lower_bound(pts.begin(), pts.end(), x);
  const auto k = static_cast<std::size_t>(it - pts.begin());
  if (k == 0) {
    return {0, 1.0, 0.0};
  }
  const std::size_t seg = k - 1;
  const double alpha_hi = (x - pts[seg]) / (pts[seg + 1] - pts[seg]);
  return {seg, 1.0 - alpha_hi, alpha_hi};
}

SampledFunction::SampledFunction(Partition partition, std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != partition_.size()) {
    throw InvalidInput("sampled function has " + std::to_string(values_.size()) +
                       " values for " + std::to_string(partition_.size()) + " points");
  }
  for (std::size_t p = 0; p < values_.size(); ++p) {
    if (!std::isfinite(values_[p])) {
      throw InvalidInput("sample value " + std::to_string(p) + " is not finite");
    }
  }
}

double interpolate(const SampledFunction& f, double x) {
  const auto c = interp_coefficients(f.partition(), x);
  return c.alpha_lo * f[c.segment] + c.alpha_hi * f[c.segment + 1];
}

double sup_distance(const SampledFunction& f, const SampledFunction& g) {
  require_same_partition(f, g);
  double d = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    d = std::max(d, std::abs(f[p] - g[p]));
  }
  return d;
}

double trapezoid_deviation(const SampledFunction& f, const SampledFunction& ref) {
  require_same_partition(f, ref);
  const auto& part = f.partition();
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < f.size(); ++p) {
    const double s_lo = std::abs(f[p] - ref[p]);
    const double s_hi = std::abs(f[p + 1] - ref[p + 1]);
    total += 0.5 * (s_lo + s_hi) * (part[p + 1] - part[p]);
  }
  return total;
}

void validate_spec(const NeighborhoodSpec& spec) {
  if (!(spec.delta_max >= 0.0) || !std::isfinite(spec.delta_max)) {
    throw InvalidInput("delta_max must be a finite nonnegative number");
  }
  if (!(spec.dev_max >= 0.0) || !std::isfinite(spec.dev_max)) {
    throw InvalidInput("dev_max must be a finite nonnegative number");
  }
  if (!(spec.lip_ratio > 1.0) || !std::isfinite(spec.lip_ratio)) {
    throw InvalidInput("lip_ratio must be greater than 1");
  }
}

MembershipReport check_neighborhood(const SampledFunction& f, const NeighborhoodSpec& spec,
                                    double tol, bool diagnose_nonadjacent) {
  const auto& ref = spec.reference;
  require_same_partition(f, ref);
  MembershipReport report;

  report.sup_violation = std::max(0.0, sup_distance(f, ref) - spec.delta_max);
  report.deviation_violation = std::max(0.0, trapezoid_deviation(f, ref) - spec.dev_max);
  for (std::size_t p = 0; p + 1 < f.size(); ++p) {
    // A flat reference segment forces equal values (right-hand side is 0).
    const double excess =
        std::abs(f[p] - f[p + 1]) - spec.lip_ratio * std::abs(ref[p] - ref[p + 1]);
    report.ratio_violation = std::max(report.ratio_violation, excess);
  }
  report.sup_ok = report.sup_violation <= tol;
  report.deviation_ok = report.deviation_violation <= tol;
  report.ratio_ok = report.ratio_violation <= tol;

  if (diagnose_nonadjacent) {
    for (std::size_t p = 0; p < f.size(); ++p) {
      for (std::size_t q = p + 2; q < f.size(); ++q) {
        if (std::abs(f[p] - f[q]) > spec.lip_ratio * std::abs(ref[p] - ref[q]) + tol) {
          report.nonadjacent_flags.emplace_back(p, q);
        }
      }
    }
  }
  return report;
}

SampledFunction sample_reference(const std::function<double(double)>& fn, const Partition& part) {
  std::vector<double> values;
  values.reserve(part.size());
  for (const double x : part.points()) {
    const double v = fn(x);
    if (!std::isfinite(v)) {
      throw InvalidInput("reference evaluator returned a non-finite value at " + std::to_string(x));
    }
    values.push_back(v);
  }
  return SampledFunction(part, std::move(values));
}

}  // namespace obro
