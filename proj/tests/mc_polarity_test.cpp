#include "oracle.hpp"

#include "satml/mc_polarity.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace satml;

namespace {

// A model whose probability grows with the fraction of binary clauses.
LogisticModel toy_model() {
  LogisticModel m;
  m.weights[1] = 3.0;
  m.weights[0] = -0.5;
  m.bias = 0.2;
  return m;
}

McConfig config(double fix, std::uint64_t trials, std::uint64_t seed = 1) {
  McConfig c;
  c.fix_percent = fix;
  c.trials_per_literal = trials;
  c.root_seed = seed;
  return c;
}

} // namespace

TEST(FixedCountTest, Floors) {
  EXPECT_EQ(fixed_count(4, 300), 12U);
  EXPECT_EQ(fixed_count(4, 150), 6U);
  EXPECT_EQ(fixed_count(2, 149), 2U);
  EXPECT_EQ(fixed_count(0, 100), 0U);
  EXPECT_EQ(fixed_count(100, 7), 7U);
}

TEST(TrialScoreTest, Branches) {
  const LogisticModel m = toy_model();
  // Fixing every variable decides the formula outright.
  const Formula unsat(2, {Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}, Clause{-1, -2}});
  for (std::uint64_t s = 0; s < 20; ++s)
    EXPECT_EQ(trial_score(m, unsat, 100, s), 0.0);
  const Formula easy(3, {Clause{1, 2, 3}, Clause{-1, 2, 3}, Clause{1, -2, 3}, Clause{1, 2, -3},
                         Clause{-1, -2, 3}, Clause{-1, 2, -3}, Clause{1, -2, -3}});
  std::size_t ones = 0, zeros = 0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    const double v = trial_score(m, easy, 100, s);
    EXPECT_TRUE(v == 0.0 || v == 1.0);
    (v == 1.0 ? ones : zeros)++;
  }
  EXPECT_GT(ones, 0U);
  EXPECT_GT(zeros, 0U);
}

TEST(TrialScoreTest, ResidualUsesModelProbability) {
  const LogisticModel m = toy_model();
  const Formula f = oracle::random_formula(50, 4.26, 3);
  const double v = trial_score(m, f, 0, 99);
  EXPECT_DOUBLE_EQ(v, predict_proba(m, extract_features(f)));
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1.0);
}

TEST(TrialScoreTest, ReplaysSeededFixing) {
  // Recompute one trial by hand from the documented sampling procedure.
  const LogisticModel m = toy_model();
  const Formula f = oracle::random_formula(50, 4.26, 8);
  const std::uint64_t seed = trial_seed(5, 7, true, 3);
  std::vector<Var> pool = f.occurring_vars();
  const std::size_t k = fixed_count(10, pool.size());
  Rng rng(seed);
  PartialAssignment a(f.num_vars());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    a.set(pool[i], rng.coin());
  }
  const auto out = apply_assignment(f, a);
  ASSERT_TRUE(std::holds_alternative<Residual>(out));
  EXPECT_DOUBLE_EQ(trial_score(m, f, 10, seed),
                   predict_proba(m, extract_features(std::get<Residual>(out).formula)));
}

TEST(ScoreLiteralTest, UnitClause) {
  const LogisticModel m = toy_model();
  const Formula f(3, {Clause{1}, Clause{-1, 2, 3}, Clause{2, -3}});
  EXPECT_EQ(score_literal(m, f, Literal(1, true), config(4, 10)), 0.0);
  const double pos = score_literal(m, f, Literal(1, false), config(4, 10));
  EXPECT_GT(pos, 0.0);
  const PolarityHints h = compute_hints(m, f, config(4, 10));
  EXPECT_TRUE(h.value(1));
  EXPECT_EQ(h.entries[0].mean_false, 0.0);
}

TEST(ScoreLiteralTest, SatisfyingAssertion) {
  const Formula f(2, {Clause{1, 2}});
  EXPECT_EQ(score_literal(toy_model(), f, Literal(1, false), config(4, 10)), 1.0);
}

TEST(ScoreLiteralTest, MeanWithinTrialRange) {
  const LogisticModel m = toy_model();
  const Formula f = oracle::random_formula(40, 4.26, 12);
  const McConfig c = config(10, 15, 4);
  PartialAssignment a(40);
  a.set(Literal(3, false));
  const Formula residual = std::get<Residual>(apply_assignment(f, a)).formula;
  double lo = 1, hi = 0, sum = 0;
  for (std::uint64_t t = 0; t < c.trials_per_literal; ++t) {
    const double v = trial_score(m, residual, c.fix_percent, trial_seed(4, 3, false, t));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  const double mean = score_literal(m, f, Literal(3, false), c);
  EXPECT_DOUBLE_EQ(mean, sum / 15.0);
  EXPECT_GE(mean, lo);
  EXPECT_LE(mean, hi);
}

TEST(ScoreLiteralTest, ZeroPercentTrialsAreIdentical) {
  const LogisticModel m = toy_model();
  const Formula f = oracle::random_formula(30, 4.26, 2);
  const double many = score_literal(m, f, Literal(5, true), config(0, 20));
  const double one = score_literal(m, f, Literal(5, true), config(0, 1));
  EXPECT_DOUBLE_EQ(many, one);
}

TEST(ScoreLiteralTest, AbsentVariable) {
  const Formula f(4, {Clause{1, 2}});
  EXPECT_THROW(score_literal(toy_model(), f, Literal(4, false), config(4, 2)),
               std::invalid_argument);
}

TEST(ComputeHintsTest, TieGoesFalseAndAbsentVariables) {
  // The zero model scores every residual 0.5, so both sides tie.
  const Formula f(5, {Clause{1, 2, 3}, Clause{-1, -2, 4}, Clause{2, 3, 4}});
  const PolarityHints h = compute_hints(LogisticModel{}, f, config(0, 3));
  ASSERT_EQ(h.num_vars(), 5U);
  for (Var v = 1; v <= 4; ++v) {
    EXPECT_EQ(h.entries[v - 1].mean_true, h.entries[v - 1].mean_false);
    EXPECT_FALSE(h.value(v));
  }
  EXPECT_EQ(h.entries[4], VarHint{});
}

TEST(ComputeHintsTest, ChoiceIsArgmaxAndDeterministic) {
  const LogisticModel m = toy_model();
  const Formula f = oracle::random_formula(25, 4.26, 21);
  const McConfig c = config(8, 6, 77);
  const PolarityHints a = compute_hints(m, f, c);
  const PolarityHints b = compute_hints(m, f, c);
  EXPECT_EQ(a, b);
  for (const VarHint &h : a.entries) {
    EXPECT_EQ(h.value, h.mean_true > h.mean_false);
    EXPECT_GE(h.mean_true, 0.0);
    EXPECT_LE(h.mean_true, 1.0);
  }
  EXPECT_NE(compute_hints(m, f, config(8, 6, 78)), a);
}

TEST(ComputeHintsTest, InvalidConfig) {
  EXPECT_THROW(compute_hints(toy_model(), oracle::f0(), config(101, 1)), std::invalid_argument);
  EXPECT_THROW(compute_hints(toy_model(), oracle::f0(), config(4, 0)), std::invalid_argument);
}

TEST(HintsFileTest, RoundTrip) {
  const PolarityHints h = compute_hints(toy_model(), oracle::random_formula(20, 4.26, 5),
                                        config(5, 4));
  std::stringstream ss;
  write_hints(ss, h);
  EXPECT_EQ(read_hints(ss), h);
  EXPECT_EQ(PolarityHints::from_assignment({true, false}).entries[0].value, true);
}
