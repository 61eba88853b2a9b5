#include "oracle.hpp"

#include "satml/features.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace satml;

namespace {

double constraint_lhs(const Clause &c, const std::vector<double> &x) {
  double s = 0;
  for (Literal l : c)
    s += l.positive() ? x[l.index()] : 1.0 - x[l.index()];
  return s;
}

void expect_feasible(const Formula &f, const LpSolution &lp) {
  ASSERT_EQ(lp.status, LpStatus::Optimal);
  ASSERT_EQ(lp.values.size(), f.num_vars());
  for (double x : lp.values) {
    EXPECT_GE(x, -1e-7);
    EXPECT_LE(x, 1.0 + 1e-7);
  }
  for (const Clause &c : f.clauses())
    EXPECT_GE(constraint_lhs(c, lp.values), 1.0 - 1e-7);
  EXPECT_NEAR(lp.objective, std::accumulate(lp.values.begin(), lp.values.end(), 0.0), 1e-9);
}

// Renames variable k to perm[k] and reverses the clause order.
Formula permuted(const Formula &f, const std::vector<Var> &perm) {
  std::vector<Clause> cs;
  for (const Clause &c : f.clauses()) {
    std::vector<Literal> lits;
    for (Literal l : c)
      lits.emplace_back(perm[l.index()], l.negated());
    cs.emplace_back(lits);
  }
  std::reverse(cs.begin(), cs.end());
  return Formula(f.num_vars(), std::move(cs));
}

} // namespace

//===----------------------------------------------------------------------===//
// LP relaxation
//===----------------------------------------------------------------------===//

TEST(LpTest, F0AllOnes) {
  const LpSolution lp = solve_lp_relaxation(oracle::f0());
  expect_feasible(oracle::f0(), lp);
  EXPECT_NEAR(lp.objective, 4.0, 1e-9);
  for (double x : lp.values)
    EXPECT_NEAR(x, 1.0, 1e-9);
}

TEST(LpTest, ContradictoryUnitsInfeasible) {
  EXPECT_EQ(solve_lp_relaxation(Formula(1, {Clause{1}, Clause{-1}})).status,
            LpStatus::Infeasible);
}

TEST(LpTest, SinglePositiveClause) {
  const Formula f(3, {Clause{1, 2, 3}});
  const LpSolution lp = solve_lp_relaxation(f);
  expect_feasible(f, lp);
  EXPECT_NEAR(lp.objective, 3.0, 1e-9);
}

TEST(LpTest, AllNegativeForcesFraction) {
  // -x1 v -x2 caps x1 + x2 at 1.
  const Formula f(2, {Clause{-1, -2}});
  const LpSolution lp = solve_lp_relaxation(f);
  expect_feasible(f, lp);
  EXPECT_NEAR(lp.objective, 1.0, 1e-9);
}

TEST(LpTest, NoVariables) {
  EXPECT_THROW(solve_lp_relaxation(Formula(0, {})), std::invalid_argument);
}

TEST(LpTest, FeasibleAndAtLeastHalfPoint) {
  // x = 1/2 everywhere satisfies every clause of width >= 2, so the optimum
  // can never be below n/2 on such formulae.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Formula f = oracle::random_formula(60, 4.26, seed);
    const LpSolution lp = solve_lp_relaxation(f);
    expect_feasible(f, lp);
    EXPECT_GE(lp.objective, 30.0 - 1e-7);
  }
}

TEST(LpTest, ObjectiveAtLeastAnyModel) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Formula f = oracle::random_formula(10, 4.26, seed);
    const LpSolution lp = solve_lp_relaxation(f);
    expect_feasible(f, lp);
    for (const auto &m : oracle::all_models(f)) {
      const double ones = static_cast<double>(std::count(m.begin(), m.end(), true));
      EXPECT_GE(lp.objective, ones - 1e-7);
    }
  }
}

TEST(LpTest, ResidualsWithUnitsStayFeasible) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Formula f = oracle::random_formula(40, 4.26, seed);
    Rng rng(seed + 1000);
    PartialAssignment a(40);
    for (int k = 0; k < 8; ++k)
      a.set(static_cast<Var>(rng.below(40) + 1), rng.coin());
    const auto out = apply_assignment(f, a);
    if (const auto *r = std::get_if<Residual>(&out)) {
      const LpSolution lp = solve_lp_relaxation(r->formula);
      if (lp.status == LpStatus::Optimal)
        expect_feasible(r->formula, lp);
    }
  }
}

TEST(LpTest, ObjectiveInvariantUnderRenaming) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Formula f = oracle::random_formula(40, 4.26, seed);
    std::vector<Var> perm(40);
    std::iota(perm.begin(), perm.end(), 1);
    Rng rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(i + 1)]);
    EXPECT_NEAR(solve_lp_relaxation(f).objective,
                solve_lp_relaxation(permuted(f, perm)).objective, 1e-7);
  }
}

//===----------------------------------------------------------------------===//
// Features
//===----------------------------------------------------------------------===//

TEST(FeaturesTest, F0) {
  const FeatureVector fv = extract_features(oracle::f0());
  EXPECT_DOUBLE_EQ(fv.clause_var_ratio, 0.75);
  EXPECT_DOUBLE_EQ(fv.frac_binary, 0.0);
  EXPECT_DOUBLE_EQ(fv.frac_horn, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(fv.posneg_var_max, 1.0);
  EXPECT_DOUBLE_EQ(fv.posneg_var_min, 0.0);
  EXPECT_DOUBLE_EQ(fv.posneg_var_mean, 1.0 / 3.0);
  EXPECT_NEAR(fv.lpslack_mean, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(fv.lpslack_coeff_variation, 0.0);
}

TEST(FeaturesTest, F0Residual) {
  PartialAssignment a(4);
  a.set(4, true);
  const Residual r = std::get<Residual>(apply_assignment(oracle::f0(), a));
  const FeatureVector fv = extract_features(r.formula);
  EXPECT_DOUBLE_EQ(fv.frac_binary, 1.0);
  EXPECT_DOUBLE_EQ(fv.clause_var_ratio, 2.0 / 3.0);
}

TEST(FeaturesTest, BalanceStatistics) {
  // x1: p=2 n=0 -> 1, x2: p=1 n=1 -> 0, x3: p=1 n=2 -> 1/3.
  const Formula f(3, {Clause{1, 2, -3}, Clause{1, -2, -3}, Clause{3}});
  const FeatureVector fv = extract_features(f);
  const double mean = (1.0 + 0.0 + 1.0 / 3.0) / 3.0;
  const double var = ((1 - mean) * (1 - mean) + mean * mean +
                      (1.0 / 3.0 - mean) * (1.0 / 3.0 - mean)) / 3.0;
  EXPECT_DOUBLE_EQ(fv.posneg_var_mean, mean);
  EXPECT_NEAR(fv.posneg_var_std, std::sqrt(var), 1e-15);
  EXPECT_NEAR(fv.posneg_var_variation, std::sqrt(var) / mean, 1e-15);
}

TEST(FeaturesTest, NonOccurringVariablesIgnored) {
  const Formula a(3, {Clause{1, 2, 3}});
  const Formula b(10, {Clause{1, 2, 3}});
  EXPECT_EQ(extract_features(a), extract_features(b));
  EXPECT_DOUBLE_EQ(extract_features(b).clause_var_ratio, 1.0 / 3.0);
}

TEST(FeaturesTest, NoClausesSentinel) {
  EXPECT_EQ(extract_features(Formula(3, {})), FeatureVector{});
  EXPECT_THROW(extract_features(Formula(0, {})), std::invalid_argument);
}

TEST(FeaturesTest, InfeasibleLpZeroesSlack) {
  const FeatureReport r = analyze_formula(Formula(2, {Clause{1}, Clause{-1}, Clause{1, 2}}));
  EXPECT_EQ(r.lp_status, LpStatus::Infeasible);
  EXPECT_EQ(r.features.lpslack_mean, 0.0);
  EXPECT_EQ(r.features.lpslack_coeff_variation, 0.0);
}

TEST(FeaturesTest, FreshFormulaRanges) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FeatureVector fv = extract_features(oracle::random_formula(50, 4.26, seed));
    EXPECT_EQ(fv.frac_binary, 0.0);
    EXPECT_GE(fv.frac_horn, 0.0);
    EXPECT_LE(fv.frac_horn, 1.0);
    EXPECT_LE(fv.posneg_var_min, fv.posneg_var_mean);
    EXPECT_LE(fv.posneg_var_mean, fv.posneg_var_max);
    EXPECT_LE(fv.posneg_var_max, 1.0);
    EXPECT_GE(fv.lpslack_mean, 0.0);
    EXPECT_LE(fv.lpslack_mean, 0.5);
    for (double x : fv.to_array())
      EXPECT_TRUE(std::isfinite(x));
  }
}

TEST(FeaturesTest, SyntacticFeaturesInvariantUnderRenaming) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Formula f = oracle::random_formula(30, 4.26, seed);
    std::vector<Var> perm(30);
    std::iota(perm.begin(), perm.end(), 1);
    std::reverse(perm.begin(), perm.end());
    const auto a = extract_features(f).to_array();
    const auto b = extract_features(permuted(f, perm)).to_array();
    for (std::size_t i = 0; i < 8; ++i)
      EXPECT_NEAR(a[i], b[i], 1e-12) << feature_names()[i];
  }
}

TEST(FeaturesTest, ArrayRoundTripAndNames) {
  const FeatureVector fv = extract_features(oracle::random_formula(20, 4.26, 1));
  EXPECT_EQ(FeatureVector::from_array(fv.to_array()), fv);
  EXPECT_EQ(feature_names()[0], "clause_var_ratio");
  EXPECT_EQ(feature_names()[9], "lpslack_coeff_variation");
}
