#pragma once

// Degradation-aware battery charging on a radial feeder with linearized
// DistFlow voltages.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "obro/model.hpp"
#include "obro/pwl.hpp"

namespace obro::bess {

/// a*d - b*d^2 with depth of discharge d = |P| dt / E_max (d <= 1).
double degradation_curve(double power, double dt, double e_max, double a, double b);

/// The empirical aging curve 9.62 d - 4.7 d^2.
double degradation_reference(double power, double dt, double e_max);

struct Line {
  int parent = 0;  // 0 is the substation
  int child = 0;
  double r = 0.0;
  double x = 0.0;
};

struct FeederSpec {
  std::vector<Line> lines;
  double v_source = 1.0;
};

struct FeederModel {
  std::vector<int> nodes;  // ascending ids, substation excluded
  std::vector<Line> lines;
  double v_source = 1.0;
  // R[i][j], X[i][j] indexed by position in `nodes`.
  std::vector<std::vector<double>> R;
  std::vector<std::vector<double>> X;

  std::size_t index_of(int node) const;
};

/// R_ij (X_ij) is twice the resistance (reactance) shared by the paths from
/// the substation to i and j. Throws InvalidInput on cycles, repeated or
/// disconnected nodes and non-positive resistances.
FeederModel build_feeder(const FeederSpec& spec);

struct Battery {
  int node = 0;
  double p_min = 0.0;
  double p_max = 0.04;
  double e_max = 0.2;
  double e0 = 0.0;
  double delta_max = 0.05;
  double dev_max = 1e-3;
  double lip_ratio = 1.5;
  // Overrides ScheduleInputs::scheme for this battery.
  std::optional<SegmentationScheme> scheme;
};

struct ScheduleInputs {
  std::size_t slots = 24;
  double dt = 1.0;
  // [slot][node position]
  std::vector<std::vector<double>> pv;
  std::vector<std::vector<double>> load_p;
  std::vector<std::vector<double>> load_q;
  std::vector<Battery> batteries;
  double v_min = 0.95;
  double v_max = 1.05;
  double w_v = 10.0;
  double epsilon = 0.1;
  SegmentationScheme scheme = EvenScheme{0.002};
  std::string data_label;
};

void validate_inputs(const FeederModel& feeder, const ScheduleInputs& in);

struct BessProblem {
  ObroProblem problem;
  std::vector<std::vector<std::size_t>> power;  // [battery][slot]
  std::vector<std::size_t> battery_pos;         // node position of each battery
  std::vector<std::vector<std::size_t>> aux;    // [node position][slot]
  std::vector<std::vector<double>> base_voltage;  // [slot][node position], no battery action
};

/// Degradation reference per battery is `a d - b d^2` sampled on the scheme.
BessProblem assemble_bess_problem(const FeederModel& feeder, const ScheduleInputs& in, double a = 9.62,
                                  double b = 4.7);

/// Node voltages [slot][node position] for a decision vector.
std::vector<std::vector<double>> voltages(const FeederModel& feeder, const BessProblem& bp,
                                          const std::vector<double>& x);

/// Stored energy [battery][slot] after each slot.
std::vector<std::vector<double>> state_of_charge(const ScheduleInputs& in, const BessProblem& bp,
                                                 const std::vector<double>& x);

/// Sum over batteries and slots of the curve a d - b d^2 at the schedule.
double degradation_sum(const ScheduleInputs& in, const BessProblem& bp, const std::vector<double>& x, double a,
                       double b);

struct ParametricResult {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> x;
  double value = 0.0;
  BessProblem problem;
};

/// Worst case over a in [a_lo, a_hi], b in [b_lo, b_hi] is (a_hi, b_lo) since
/// the curve grows in a and shrinks in b for d in (0, 1]; the nominal problem
/// with that curve is solved by one master solve.
ParametricResult parametric_baseline(const FeederModel& feeder, const ScheduleInputs& in, double a_lo,
                                     double a_hi, double b_lo, double b_hi);

}  // namespace obro::bess
