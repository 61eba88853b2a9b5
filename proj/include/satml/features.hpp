#pragma once

// Instance features for satisfiability prediction, including the LP
// relaxation they depend on.

#include "satml/cnf.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace satml {

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  /// values[v-1] for every formula variable; empty when infeasible.
  std::vector<double> values;
  double objective = 0.0;
  /// Dual simplex pivots, summed over all constraint-generation rounds.
  std::size_t pivots = 0;
};

/// Solves  max sum(x)  s.t. every clause has  sum_pos x + sum_neg (1-x) >= 1,
/// 0 <= x <= 1.
///
/// The LP is solved in the complemented variables y = 1 - x, where the
/// objective becomes min sum(y) and the all-zero point is dual feasible, so a
/// dual simplex starts from the slack basis without a phase one. The leaving
/// row is the most infeasible one; after a run of degenerate pivots the
/// choice switches to Bland's rule, which rules out cycling.
/// Clause rows and upper bounds are added lazily: only constraints
/// violated by the current optimum enter the tableau, and the loop ends when
/// the restricted optimum satisfies every constraint of the full LP.
LpSolution solve_lp_relaxation(const Formula &f);

inline constexpr std::size_t kNumFeatures = 10;

struct FeatureVector {
  double clause_var_ratio = 0;
  double frac_binary = 0;
  double frac_horn = 0;
  double posneg_var_max = 0;
  double posneg_var_min = 0;
  double posneg_var_mean = 0;
  double posneg_var_std = 0;
  double posneg_var_variation = 0;
  double lpslack_mean = 0;
  double lpslack_coeff_variation = 0;

  std::array<double, kNumFeatures> to_array() const;
  static FeatureVector from_array(const std::array<double, kNumFeatures> &a);
  bool operator==(const FeatureVector &) const = default;
};

/// Column names in feature order.
const std::array<std::string, kNumFeatures> &feature_names();

struct FeatureReport {
  FeatureVector features;
  LpStatus lp_status = LpStatus::Optimal;
};

/// Features plus the LP status; an infeasible LP proves unsatisfiability.
/// A formula without clauses yields the all-zero vector.
FeatureReport analyze_formula(const Formula &f);

inline FeatureVector extract_features(const Formula &f) {
  return analyze_formula(f).features;
}

} // namespace satml
