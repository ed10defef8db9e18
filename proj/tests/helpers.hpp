#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "obro/error.hpp"
#include "obro/model.hpp"

namespace obro::testing {

// One variable x in [0, 1] evaluated by one term with an identity reference
// sampled on {0, 1}.
inline ObroProblem identity_problem(double delta = 0.1, double lip = 2.0, double dev = 10.0, double eps = 0.1) {
  ObroProblem prob;
  prob.add_variable(0.0, 1.0, 0.0, "x");
  prob.epsilon = eps;
  SampledFunction ref(Partition({0.0, 1.0}), {0.0, 1.0});
  prob.terms.push_back(UncertainTerm{"f", NeighborhoodSpec{ref, delta, dev, lip}, {0}});
  return prob;
}

inline SampledFunction shifted(const SampledFunction& f, double by) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (auto& e : v) e += by;
  return SampledFunction(f.partition(), v);
}

struct RandomShape {
  std::size_t max_terms = 2;
  std::size_t max_samples = 4;
  std::size_t max_evals = 3;
  bool coupling_row = true;
};

// Random problem: every evaluation variable is boxed to its partition range,
// references are random walks, and an optional covering row couples the
// variables. Uses only the generator so runs are reproducible.
inline ObroProblem random_problem(std::mt19937_64& rng, const RandomShape& shape = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(unit(rng) * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
  };
  ObroProblem prob;
  prob.epsilon = 0.05 + 0.3 * unit(rng);
  const std::size_t terms = pick(1, shape.max_terms);
  for (std::size_t i = 0; i < terms; ++i) {
    const std::size_t n = pick(2, shape.max_samples);
    std::vector<double> pts{0.0}, vals{unit(rng)};
    for (std::size_t p = 1; p < n; ++p) {
      pts.push_back(pts.back() + 0.2 + unit(rng));
      vals.push_back(vals.back() + (unit(rng) - 0.3) * 1.5);
    }
    const double delta = 0.05 + 0.2 * unit(rng);
    const double length = pts.back();
    const double dev = (0.2 + unit(rng)) * delta * length;
    const double lip = 1.2 + unit(rng) * 1.5;
    UncertainTerm term{"t" + std::to_string(i), NeighborhoodSpec{SampledFunction(Partition(pts), vals), delta, dev, lip}, {}};
    const std::size_t evals = pick(1, shape.max_evals);
    for (std::size_t e = 0; e < evals; ++e) {
      term.evals.push_back(prob.add_variable(0.0, length, (unit(rng) - 0.5) * 0.4));
    }
    prob.terms.push_back(std::move(term));
  }
  if (shape.coupling_row) {
    std::vector<LinearTerm> row;
    double cap = 0.0;
    for (std::size_t j = 0; j < prob.num_vars(); ++j) {
      row.push_back({j, 1.0});
      cap += prob.upper[j];
    }
    prob.rows.push_back({row, RowSense::greater_equal, cap * 0.4 * unit(rng), "cover"});
  }
  return prob;
}

inline std::vector<double> random_point(std::mt19937_64& rng, const ObroProblem& prob) {
  // Rejection sampling against the polyhedron; the covering row is loose.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> x(prob.num_vars());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = prob.lower[j] + unit(rng) * (prob.upper[j] - prob.lower[j]);
    if (max_violation(polyhedron(prob), x) <= 0.0) return x;
  }
  return prob.upper;
}

}  // namespace obro::testing
