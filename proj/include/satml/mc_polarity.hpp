#pragma once

// Monte-Carlo polarity selection: each literal is scored by the mean
// predicted satisfiability of random partial fixings of the formula left
// after asserting it.

#include "satml/cnf.hpp"
#include "satml/hints.hpp"
#include "satml/logit.hpp"

#include <cstdint>

namespace satml {

struct McConfig {
  /// Percentage of the occurring variables fixed at random in each trial.
  double fix_percent = 4.0;
  std::uint64_t trials_per_literal = 100;
  std::uint64_t root_seed = 0;

  void validate() const;
};

/// Number of variables a trial fixes: floor(percent/100 * occurring).
std::size_t fixed_count(double fix_percent, std::size_t occurring);

/// One trial: fix random occurring variables to random values, then score
/// the result (1 satisfied, 0 conflict or LP-infeasible, else the model's
/// probability on the residual).
double trial_score(const LogisticModel &model, const Formula &f,
                   double fix_percent, std::uint64_t trial_seed);

/// Seed of trial `trial` for literal (var, negated) under `root_seed`.
std::uint64_t trial_seed(std::uint64_t root_seed, Var var, bool negated,
                         std::uint64_t trial);

/// Mean trial score after asserting `lit`.
double score_literal(const LogisticModel &model, const Formula &f, Literal lit,
                     const McConfig &cfg);

PolarityHints compute_hints(const LogisticModel &model, const Formula &f,
                            const McConfig &cfg);

} // namespace satml
