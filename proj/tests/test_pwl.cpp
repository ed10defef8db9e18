#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "obro/error.hpp"
#include "obro/pwl.hpp"

using namespace obro;

namespace {

// Degradation curve written out independently of the library's BESS module.
double aging(double p) {
  const double dod = std::abs(p) * 1.0 / 0.2;
  return 9.62 * dod - 4.7 * dod * dod;
}

SampledFunction fn(std::vector<double> pts, std::vector<double> vals) {
  return SampledFunction(Partition(std::move(pts)), std::move(vals));
}

NeighborhoodSpec spec_for(SampledFunction ref, double delta, double dev, double lip) {
  return NeighborhoodSpec{std::move(ref), delta, dev, lip};
}

}  // namespace

TEST(Partition, RejectsBadPoints) {
  EXPECT_THROW(Partition({0.0}), InvalidInput);
  EXPECT_THROW(Partition({0.0, 0.0}), InvalidInput);
  EXPECT_THROW(Partition({0.0, 1.0, 0.5}), InvalidInput);
  EXPECT_THROW(Partition({0.0, NAN}), InvalidInput);
}

TEST(MakePartition, EvenBenchmarkGrid) {
  const auto part = make_partition(0.0, 0.04, EvenScheme{0.002});
  ASSERT_EQ(part.size(), 21u);
  for (std::size_t p = 0; p < part.size(); ++p) {
    EXPECT_NEAR(part[p], 0.002 * static_cast<double>(p), 1e-15);
  }
  EXPECT_EQ(part.lower(), 0.0);
  EXPECT_EQ(part.upper(), 0.04);
}

TEST(MakePartition, TwoPointPartition) {
  const auto part = make_partition(0.0, 1.0, EvenScheme{1.0});
  ASSERT_EQ(part.size(), 2u);
  EXPECT_EQ(part[0], 0.0);
  EXPECT_EQ(part[1], 1.0);
}

TEST(MakePartition, ShortFinalSegment) {
  const auto part = make_partition(0.0, 1.0, EvenScheme{0.3});
  ASSERT_EQ(part.size(), 5u);
  EXPECT_NEAR(part[3], 0.9, 1e-15);
  EXPECT_EQ(part[4], 1.0);
}

TEST(MakePartition, HeterogeneousCountsBothGrids) {
  // [0, 0.02] in steps of 0.0008 gives 26 points, [0.02, 0.04] in steps of
  // 0.002 adds 10 more (0.02 is shared).
  std::size_t expected = 0;
  for (double x = 0.0; x <= 0.02 + 1e-12; x += 0.0008) ++expected;
  for (double x = 0.022; x <= 0.04 + 1e-12; x += 0.002) ++expected;
  ASSERT_EQ(expected, 36u);

  const auto part = make_partition(
      0.0, 0.04, HeterogeneousScheme{{{0.0, 0.02, 0.0008}, {0.02, 0.04, 0.002}}});
  EXPECT_EQ(part.size(), expected);
  EXPECT_NEAR(part[25], 0.02, 1e-15);
  EXPECT_NEAR(part[26], 0.022, 1e-15);
  EXPECT_EQ(part.upper(), 0.04);
}

TEST(MakePartition, Errors) {
  EXPECT_THROW(make_partition(0.0, 1.0, EvenScheme{0.0}), InvalidInput);
  EXPECT_THROW(make_partition(0.0, 1.0, EvenScheme{-0.1}), InvalidInput);
  EXPECT_THROW(make_partition(1.0, 1.0, EvenScheme{0.1}), InvalidInput);
  EXPECT_THROW(make_partition(0.0, 1.0, HeterogeneousScheme{{{0.0, 0.6, 0.1}, {0.5, 1.0, 0.1}}}),
               InvalidInput);
  EXPECT_THROW(make_partition(0.0, 1.0, HeterogeneousScheme{{{0.0, 0.4, 0.1}, {0.5, 1.0, 0.1}}}),
               InvalidInput);
  EXPECT_THROW(make_partition(0.0, 1.0, HeterogeneousScheme{{{0.0, 0.5, 0.1}}}), InvalidInput);
  EXPECT_THROW(make_partition(0.0, 1.0, HeterogeneousScheme{}), InvalidInput);
}

TEST(InterpCoefficients, MidpointOfSecondSegment) {
  const Partition part({0.0, 0.5, 1.0});
  const auto c = interp_coefficients(part, 0.75);
  EXPECT_EQ(c.segment, 1u);
  EXPECT_DOUBLE_EQ(c.alpha_lo, 0.5);
  EXPECT_DOUBLE_EQ(c.alpha_hi, 0.5);
}

TEST(InterpCoefficients, InteriorSampleUsesLeftSegment) {
  const Partition part({0.0, 0.5, 1.0});
  const auto c = interp_coefficients(part, 0.5);
  EXPECT_EQ(c.segment, 0u);
  EXPECT_EQ(c.alpha_lo, 0.0);
  EXPECT_EQ(c.alpha_hi, 1.0);
}

TEST(InterpCoefficients, BenchmarkGridHandSolved) {
  // 0.0015 = a * 0 + b * 0.002, a + b = 1  =>  b = 0.75.
  const auto part = make_partition(0.0, 0.04, EvenScheme{0.002});
  const auto c = interp_coefficients(part, 0.0015);
  EXPECT_EQ(c.segment, 0u);
  EXPECT_NEAR(c.alpha_lo, 0.25, 1e-12);
  EXPECT_NEAR(c.alpha_hi, 0.75, 1e-12);
}

TEST(InterpCoefficients, Endpoints) {
  const Partition part({0.0, 0.5, 1.0});
  auto c = interp_coefficients(part, 0.0);
  EXPECT_EQ(c.segment, 0u);
  EXPECT_EQ(c.alpha_lo, 1.0);
  c = interp_coefficients(part, 1.0);
  EXPECT_EQ(c.segment, 1u);
  EXPECT_EQ(c.alpha_hi, 1.0);
}

TEST(InterpCoefficients, OutOfRange) {
  const Partition part({0.0, 1.0});
  EXPECT_THROW(interp_coefficients(part, -0.01), InvalidInput);
  EXPECT_THROW(interp_coefficients(part, 1.01), InvalidInput);
  // Round-off from a solver is clamped.
  EXPECT_EQ(interp_coefficients(part, -1e-13).alpha_lo, 1.0);
}

TEST(InterpCoefficients, PropertyValidCoefficients) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pts{unit(rng) * 10.0 - 5.0};
    const int n = 2 + static_cast<int>(unit(rng) * 10);
    for (int k = 1; k < n; ++k) pts.push_back(pts.back() + 0.01 + unit(rng));
    const Partition part(pts);
    for (int s = 0; s < 20; ++s) {
      const double x = part.lower() + unit(rng) * part.length();
      const auto c = interp_coefficients(part, x);
      EXPECT_GE(c.alpha_lo, 0.0);
      EXPECT_LE(c.alpha_lo, 1.0);
      EXPECT_GE(c.alpha_hi, 0.0);
      EXPECT_LE(c.alpha_hi, 1.0);
      EXPECT_NEAR(c.alpha_lo + c.alpha_hi, 1.0, 1e-15);
      const double back = c.alpha_lo * part[c.segment] + c.alpha_hi * part[c.segment + 1];
      EXPECT_NEAR(back, x, 1e-12 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST(Interpolate, LinearBetweenSamples) {
  const auto f = fn({0.0, 0.5, 1.0}, {0.0, 1.0, 4.0});
  EXPECT_DOUBLE_EQ(interpolate(f, 0.75), 2.5);
  EXPECT_DOUBLE_EQ(interpolate(f, 0.5), 1.0);
  EXPECT_THROW(interpolate(f, 2.0), InvalidInput);
}

TEST(Interpolate, DegradationReferenceMidSegment) {
  const auto part = make_partition(0.0, 0.04, EvenScheme{0.002});
  const auto ref = sample_reference(aging, part);
  EXPECT_NEAR(interpolate(ref, 0.003), 0.5 * (aging(0.002) + aging(0.004)), 1e-14);
}

TEST(Interpolate, PropertyExactAtSamples) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    std::vector<double> pts, vals;
    double x = gauss(rng);
    for (int k = 0; k < n; ++k) {
      pts.push_back(x);
      vals.push_back(gauss(rng) * 100.0);
      x += 0.05 + std::abs(gauss(rng));
    }
    const auto f = fn(pts, vals);
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(interpolate(f, pts[k]), vals[k], 1e-15 * std::max(1.0, std::abs(vals[k])));
    }
  }
}

TEST(SupDistance, Examples) {
  EXPECT_EQ(sup_distance(fn({0, 1}, {0, 1}), fn({0, 1}, {0, 1})), 0.0);
  EXPECT_NEAR(sup_distance(fn({0, 1}, {0, 1.1}), fn({0, 1}, {0, 1})), 0.1, 1e-15);
  EXPECT_EQ(sup_distance(fn({0, 1, 2}, {1, 2, 3}), fn({0, 1, 2}, {3, 2, 1})), 2.0);
  EXPECT_THROW(sup_distance(fn({0, 1}, {0, 1}), fn({0, 2}, {0, 1})), InvalidInput);
}

TEST(TrapezoidDeviation, Examples) {
  const auto ref = fn({0, 1, 2}, {5, 5, 5});
  EXPECT_EQ(trapezoid_deviation(ref, ref), 0.0);
  EXPECT_DOUBLE_EQ(trapezoid_deviation(fn({0, 1, 2}, {5, 6, 5}), ref), 1.0);
  const auto r2 = fn({0, 0.02, 0.04}, {0.0, 0.915, 1.736});
  const auto shifted = fn({0, 0.02, 0.04}, {0.1, 1.015, 1.836});
  EXPECT_NEAR(trapezoid_deviation(shifted, r2), 0.004, 1e-15);
  EXPECT_THROW(trapezoid_deviation(fn({0, 1}, {0, 1}), fn({0, 2}, {0, 1})), InvalidInput);
}

TEST(Metrics, PropertySymmetryAndTriangle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<double> pts;
    double x = 0.0;
    for (int k = 0; k < n; ++k) {
      pts.push_back(x);
      x += 0.1 + std::abs(gauss(rng));
    }
    auto draw = [&] {
      std::vector<double> v;
      for (int k = 0; k < n; ++k) v.push_back(gauss(rng));
      return fn(pts, v);
    };
    const auto f = draw(), g = draw(), h = draw();
    EXPECT_NEAR(trapezoid_deviation(f, g), trapezoid_deviation(g, f), 1e-12);
    EXPECT_LE(trapezoid_deviation(f, h), trapezoid_deviation(f, g) + trapezoid_deviation(g, h) + 1e-12);
    EXPECT_EQ(sup_distance(f, f), 0.0);
    EXPECT_EQ(sup_distance(f, g), sup_distance(g, f));
    EXPECT_LE(sup_distance(f, h), sup_distance(f, g) + sup_distance(g, h) + 1e-12);
    if (!(f == g)) EXPECT_GT(sup_distance(f, g), 0.0);
  }
}

TEST(CheckNeighborhood, ReferenceIsMember) {
  const auto ref = fn({0, 1, 2}, {0, 1, 3});
  EXPECT_TRUE(check_neighborhood(ref, spec_for(ref, 0.0, 0.0, 1.01)).ok());
  EXPECT_TRUE(check_neighborhood(ref, spec_for(ref, 0.3, 0.1, 4.0)).ok());
}

TEST(CheckNeighborhood, SupBoundViolated) {
  const auto ref = fn({0, 1, 2}, {0, 1, 3});
  const auto spec = spec_for(ref, 0.1, 100.0, 100.0);
  const auto report = check_neighborhood(fn({0, 1, 2}, {0, 1.2, 3}), spec);
  EXPECT_FALSE(report.sup_ok);
  EXPECT_NEAR(report.sup_violation, 0.1, 1e-12);
  EXPECT_TRUE(report.deviation_ok);
  EXPECT_TRUE(report.ratio_ok);
}

TEST(CheckNeighborhood, DeviationBudgetViolated) {
  const auto ref = fn({0, 1, 2}, {0, 1, 3});
  const auto report = check_neighborhood(fn({0, 1, 2}, {0.1, 1.1, 3.1}), spec_for(ref, 1.0, 0.1, 3.0));
  EXPECT_FALSE(report.deviation_ok);
  EXPECT_NEAR(report.deviation_violation, 0.1, 1e-12);
}

TEST(CheckNeighborhood, FlatReferenceSegmentForcesEquality) {
  const auto ref = fn({0, 1, 2}, {1, 1, 2});
  const auto spec = spec_for(ref, 0.5, 10.0, 1.5);
  EXPECT_FALSE(check_neighborhood(fn({0, 1, 2}, {1.1, 1.0, 2.0}), spec).ratio_ok);
  EXPECT_TRUE(check_neighborhood(fn({0, 1, 2}, {1.1, 1.1, 2.0}), spec).ok());
}

TEST(CheckNeighborhood, NonadjacentPairsAreOnlyFlagged) {
  // Adjacent ratios pass, the (0, 2) pair exceeds L * |ref0 - ref2| = 0.
  const auto ref = fn({0, 1, 2}, {0, 1, 0});
  const auto f = fn({0, 1, 2}, {0, 1.2, 0.3});
  const auto spec = spec_for(ref, 0.5, 10.0, 1.5);
  const auto report = check_neighborhood(f, spec, kMembershipTolerance, true);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.nonadjacent_flags.size(), 1u);
  EXPECT_EQ(report.nonadjacent_flags[0].first, 0u);
  EXPECT_EQ(report.nonadjacent_flags[0].second, 2u);
}

TEST(CheckNeighborhood, PropertyReferenceAlwaysPasses) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts{0.0}, vals{unit(rng)};
    for (int k = 1; k < 2 + trial % 10; ++k) {
      pts.push_back(pts.back() + 0.01 + unit(rng));
      vals.push_back(unit(rng) * 5.0);
    }
    const auto ref = fn(pts, vals);
    const auto spec = spec_for(ref, unit(rng), unit(rng), 1.0 + 1e-3 + unit(rng) * 3.0);
    EXPECT_TRUE(check_neighborhood(ref, spec).ok());
  }
}

TEST(NeighborhoodSpec, Validation) {
  const auto ref = fn({0, 1}, {0, 1});
  EXPECT_NO_THROW(validate_spec(spec_for(ref, 0.0, 0.0, 1.5)));
  EXPECT_THROW(validate_spec(spec_for(ref, -0.1, 0.0, 1.5)), InvalidInput);
  EXPECT_THROW(validate_spec(spec_for(ref, 0.1, -1.0, 1.5)), InvalidInput);
  EXPECT_THROW(validate_spec(spec_for(ref, 0.1, 0.0, 1.0)), InvalidInput);
}

TEST(SampleReference, Examples) {
  const Partition part({0.0, 0.5, 1.0});
  const auto id = sample_reference([](double x) { return x; }, part);
  EXPECT_EQ(id.values()[1], 0.5);

  const auto aged = sample_reference(aging, Partition({0.0, 0.02, 0.04}));
  EXPECT_EQ(aged[0], 0.0);
  EXPECT_NEAR(aged[1], 0.915, 1e-12);
  EXPECT_NEAR(aged[2], 1.736, 1e-12);

  const auto c = sample_reference([](double) { return 2.5; }, part);
  for (const double v : c.values()) EXPECT_EQ(v, 2.5);

  EXPECT_THROW(sample_reference([](double x) { return std::log(x - 0.6); }, part),
               InvalidInput);
}

TEST(SampleReference, RefinementShrinksRepresentationError) {
  // Dense evaluation of the closed form is the oracle for the sup error.
  auto sup_error = [](double step) {
    const auto ref = sample_reference(aging, make_partition(0.0, 0.04, EvenScheme{step}));
    double worst = 0.0;
    for (int k = 0; k <= 40000; ++k) {
      const double x = 0.04 * k / 40000.0;
      worst = std::max(worst, std::abs(interpolate(ref, x) - aging(x)));
    }
    return worst;
  };
  const double e1 = sup_error(0.004);
  const double e2 = sup_error(0.002);
  const double e3 = sup_error(0.001);
  EXPECT_LT(e2, e1);
  EXPECT_LT(e3, e2);
  // Quadratic target: the chord error is 4.7 (h / 0.2)^2 / 4 exactly.
  EXPECT_NEAR(e1, 4.7 * std::pow(0.004 / 0.2, 2) / 4.0, 1e-9);
}
