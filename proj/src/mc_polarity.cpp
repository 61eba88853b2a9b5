#include "satml/mc_polarity.hpp"
#include "satml/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace satml {

void McConfig::validate() const {
  if (!(fix_percent >= 0 && fix_percent <= 100))
    throw std::invalid_argument("fix percent must lie in [0,100]");
  if (trials_per_literal < 1)
    throw std::invalid_argument("at least one trial per literal is required");
}

std::size_t fixed_count(double fix_percent, std::size_t occurring) {
  // Multiply before dividing so that e.g. 4% of 300 is exactly 12.
  return static_cast<std::size_t>(
      std::floor(fix_percent * static_cast<double>(occurring) / 100.0 + 1e-9));
}

std::uint64_t trial_seed(std::uint64_t root_seed, Var var, bool negated,
                         std::uint64_t trial) {
  return derive_seed(root_seed, var, negated ? 1 : 0, trial);
}

double trial_score(const LogisticModel &model, const Formula &f,
                   double fix_percent, std::uint64_t seed) {
  std::vector<Var> pool = f.occurring_vars();
  const std::size_t k = fixed_count(fix_percent, pool.size());
  Rng rng(seed);
  PartialAssignment fixing(f.num_vars());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    fixing.set(pool[i], rng.coin());
  }

  const SimplifyOutcome outcome = apply_assignment(f, fixing);
  if (std::holds_alternative<Satisfied>(outcome))
    return 1.0;
  if (std::holds_alternative<Conflict>(outcome))
    return 0.0;
  const FeatureReport report = analyze_formula(std::get<Residual>(outcome).formula);
  if (report.lp_status == LpStatus::Infeasible)
    return 0.0;
  return predict_proba(model, report.features);
}

double score_literal(const LogisticModel &model, const Formula &f, Literal lit,
                     const McConfig &cfg) {
  cfg.validate();
  if (lit.var() > f.num_vars())
    throw std::invalid_argument("literal variable beyond formula");
  bool occurs = false;
  for (const Clause &c : f.clauses())
    for (Literal l : c)
      occurs = occurs || l.var() == lit.var();
  if (!occurs)
    throw std::invalid_argument("variable " + std::to_string(lit.var()) +
                                " does not occur in the formula");

  PartialAssignment assert_lit(f.num_vars());
  assert_lit.set(lit);
  const SimplifyOutcome outcome = apply_assignment(f, assert_lit);
  if (std::holds_alternative<Satisfied>(outcome))
    return 1.0;
  if (std::holds_alternative<Conflict>(outcome))
    return 0.0;
  const Formula &residual = std::get<Residual>(outcome).formula;

  double sum = 0.0;
  for (std::uint64_t t = 0; t < cfg.trials_per_literal; ++t)
    sum += trial_score(model, residual, cfg.fix_percent,
                       trial_seed(cfg.root_seed, lit.var(), lit.negated(), t));
  return sum / static_cast<double>(cfg.trials_per_literal);
}

PolarityHints compute_hints(const LogisticModel &model, const Formula &f,
                            const McConfig &cfg) {
  cfg.validate();
  PolarityHints hints;
  hints.entries.resize(f.num_vars());
  for (Var v : f.occurring_vars()) {
    VarHint &h = hints.entries[v - 1];
    h.mean_true = score_literal(model, f, Literal(v, false), cfg);
    h.mean_false = score_literal(model, f, Literal(v, true), cfg);
    h.value = h.mean_true > h.mean_false;
  }
  return hints;
}

} // namespace satml
