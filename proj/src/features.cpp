#include "satml/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace satml {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-9;

/// Dictionary-form dual simplex for  min c.y  s.t. rows a.y >= b, y >= 0,
/// with c >= 0. Each basic variable is kept as
///   B_i = beta_i + sum_j tab(i, j) * N_j
/// over the nonbasic variables N_j (all at zero). The nonbasic count never
/// changes, so the tableau is rows x n regardless of how many rows exist.
/// Variable ids: structural 0..n-1, surplus of row k is n + k. Ties in the
/// ratio test go to the smallest id.
class DualSimplex {
public:
  explicit DualSimplex(std::size_t n) : n_(n), cost_(n, 1.0), col_var_(n), where_(n) {
    for (std::size_t j = 0; j < n; ++j) {
      col_var_[j] = static_cast<std::uint32_t>(j);
      where_[j] = -static_cast<std::int64_t>(j) - 1;
    }
  }

  struct Term {
    std::uint32_t var;
    double coeff;
  };

  void add_row(std::span<const Term> terms, double rhs) {
    const std::size_t r = beta_.size();
    tab_.resize(tab_.size() + n_, 0.0);
    double *row = &tab_[r * n_];
    double beta = -rhs;
    for (const Term &t : terms) {
      const std::int64_t w = where_[t.var];
      if (w < 0) {
        row[-w - 1] += t.coeff;
      } else {
        const double *src = &tab_[static_cast<std::size_t>(w) * n_];
        beta += t.coeff * beta_[static_cast<std::size_t>(w)];
        for (std::size_t j = 0; j < n_; ++j)
          row[j] += t.coeff * src[j];
      }
    }
    beta_.push_back(beta);
    const auto id = static_cast<std::uint32_t>(where_.size());
    row_var_.push_back(id);
    where_.push_back(static_cast<std::int64_t>(r));
  }

  /// Runs to optimality. Returns false when the rows are infeasible.
  bool run() {
    std::size_t stalled = 0;
    for (;;) {
      // Most infeasible row first; after a run of degenerate pivots fall back
      // to the smallest id so the method cannot cycle.
      const bool bland = stalled >= kStallLimit;
      std::size_t leave = npos;
      for (std::size_t i = 0; i < beta_.size(); ++i) {
        if (beta_[i] >= -kFeasEps)
          continue;
        if (leave == npos ||
            (bland ? row_var_[i] < row_var_[leave] : beta_[i] < beta_[leave]))
          leave = i;
      }
      if (leave == npos)
        return true;

      const double *row = &tab_[leave * n_];
      std::size_t enter = npos;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n_; ++j) {
        if (row[j] <= kPivotEps)
          continue;
        const double ratio = cost_[j] / row[j];
        if (enter == npos || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && col_var_[j] < col_var_[enter])) {
          best = std::min(best, ratio);
          enter = j;
        }
      }
      if (enter == npos)
        return false;
      stalled = best <= 1e-12 ? stalled + 1 : 0;
      pivot(leave, enter);
      ++pivots_;
    }
  }

  double value(std::uint32_t var) const {
    const std::int64_t w = where_[var];
    return w < 0 ? 0.0 : beta_[static_cast<std::size_t>(w)];
  }

  std::size_t pivots() const { return pivots_; }
  std::size_t rows() const { return beta_.size(); }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static constexpr std::size_t kStallLimit = 50;

  void pivot(std::size_t r, std::size_t e) {
    double *prow = &tab_[r * n_];
    const double inv = 1.0 / prow[e];
    beta_[r] = -beta_[r] * inv;
    nz_.clear();
    for (std::size_t j = 0; j < n_; ++j) {
      if (prow[j] == 0.0)
        continue;
      prow[j] = -prow[j] * inv;
      if (j != e)
        nz_.push_back(j);
    }
    prow[e] = inv;
    const bool dense = nz_.size() * 4 > n_;

    for (std::size_t i = 0; i < beta_.size(); ++i) {
      if (i == r)
        continue;
      double *row = &tab_[i * n_];
      const double c = row[e];
      if (c == 0.0)
        continue;
      beta_[i] += c * beta_[r];
      if (dense) {
        for (std::size_t j = 0; j < n_; ++j)
          row[j] += c * prow[j];
      } else {
        for (std::size_t j : nz_)
          row[j] += c * prow[j];
      }
      row[e] = c * inv;
    }

    const double c = cost_[e];
    if (c != 0.0) {
      for (std::size_t j : nz_)
        cost_[j] = std::max(0.0, cost_[j] + c * prow[j]);
      cost_[e] = c * inv;
    }

    std::swap(row_var_[r], col_var_[e]);
    where_[row_var_[r]] = static_cast<std::int64_t>(r);
    where_[col_var_[e]] = -static_cast<std::int64_t>(e) - 1;
  }

  std::size_t n_;
  std::vector<double> beta_;
  std::vector<double> tab_;
  std::vector<double> cost_;
  std::vector<std::uint32_t> row_var_;
  std::vector<std::uint32_t> col_var_;
  std::vector<std::int64_t> where_; // row index, or -(column + 1)
  std::vector<std::size_t> nz_;
  std::size_t pivots_ = 0;
};

// Clause row in complemented variables y = 1 - x:
//   sum_neg y - sum_pos y >= 1 - |pos|
double clause_rhs(const Clause &c) {
  double pos = 0;
  for (Literal l : c)
    pos += l.positive() ? 1.0 : 0.0;
  return 1.0 - pos;
}

double clause_lhs(const Clause &c, const DualSimplex &lp) {
  double s = 0;
  for (Literal l : c)
    s += l.negated() ? lp.value(l.index()) : -lp.value(l.index());
  return s;
}

void add_clause_row(DualSimplex &lp, const Clause &c) {
  std::vector<DualSimplex::Term> terms;
  terms.reserve(c.size());
  for (Literal l : c)
    terms.push_back({l.index(), l.negated() ? 1.0 : -1.0});
  lp.add_row(terms, clause_rhs(c));
}

struct Stats {
  double mean = 0, std = 0, min = 0, max = 0;
};

Stats summarize(std::span<const double> xs) {
  Stats s;
  if (xs.empty())
    return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0;
  for (double x : xs)
    sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double sq = 0;
  for (double x : xs)
    sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return s;
}

double variation(const Stats &s) { return s.mean == 0.0 ? 0.0 : s.std / s.mean; }

} // namespace

//===----------------------------------------------------------------------===//
// LP relaxation
//===----------------------------------------------------------------------===//

LpSolution solve_lp_relaxation(const Formula &f) {
  const Var n = f.num_vars();
  if (n == 0)
    throw std::invalid_argument("LP relaxation of a formula without variables");

  DualSimplex lp(n);
  const auto clauses = f.clauses();
  std::vector<char> clause_added(clauses.size(), 0);
  std::vector<char> bound_added(n, 0);

  // At y = 0 only all-negative clauses are violated.
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (clause_rhs(clauses[i]) > 0) {
      add_clause_row(lp, clauses[i]);
      clause_added[i] = 1;
    }
  }

  LpSolution sol;
  for (;;) {
    if (!lp.run()) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = lp.pivots();
      return sol;
    }
    bool added = false;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      if (clause_added[i])
        continue;
      if (clause_lhs(clauses[i], lp) < clause_rhs(clauses[i]) - kFeasEps) {
        add_clause_row(lp, clauses[i]);
        clause_added[i] = 1;
        added = true;
      }
    }
    for (Var k = 0; k < n; ++k) {
      if (!bound_added[k] && lp.value(k) > 1.0 + kFeasEps) {
        const DualSimplex::Term t{k, -1.0};
        lp.add_row(std::span(&t, 1), -1.0);
        bound_added[k] = 1;
        added = true;
      }
    }
    if (!added)
      break;
  }

  sol.status = LpStatus::Optimal;
  sol.pivots = lp.pivots();
  sol.values.resize(n);
  for (Var k = 0; k < n; ++k) {
    sol.values[k] = std::clamp(1.0 - lp.value(k), 0.0, 1.0);
    sol.objective += sol.values[k];
  }
  return sol;
}

//===----------------------------------------------------------------------===//
// Features
//===----------------------------------------------------------------------===//

std::array<double, kNumFeatures> FeatureVector::to_array() const {
  return {clause_var_ratio,  frac_binary,         frac_horn,
          posneg_var_max,    posneg_var_min,      posneg_var_mean,
          posneg_var_std,    posneg_var_variation, lpslack_mean,
          lpslack_coeff_variation};
}

FeatureVector FeatureVector::from_array(const std::array<double, kNumFeatures> &a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9]};
}

const std::array<std::string, kNumFeatures> &feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "clause_var_ratio",       "frac_binary",
      "frac_horn",              "posneg_ratio_var_max",
      "posneg_ratio_var_min",   "posneg_ratio_var_mean",
      "posneg_ratio_var_std",   "posneg_ratio_var_variation",
      "lpslack_mean",           "lpslack_coeff_variation"};
  return names;
}

FeatureReport analyze_formula(const Formula &f) {
  if (f.num_vars() == 0)
    throw std::invalid_argument("cannot featurize a formula without variables");
  FeatureReport report;
  if (f.num_clauses() == 0)
    return report;

  FeatureVector &fv = report.features;
  const auto clauses = f.clauses();
  std::vector<std::uint32_t> pos(f.num_vars(), 0), neg(f.num_vars(), 0);
  std::size_t binary = 0, horn = 0;
  for (const Clause &c : clauses) {
    std::size_t positives = 0;
    for (Literal l : c) {
      if (l.positive()) {
        ++pos[l.index()];
        ++positives;
      } else {
        ++neg[l.index()];
      }
    }
    binary += c.size() == 2 ? 1 : 0;
    horn += positives <= 1 ? 1 : 0;
  }

  std::vector<double> balance;
  std::vector<Var> occurring;
  for (Var k = 0; k < f.num_vars(); ++k) {
    const double total = pos[k] + neg[k];
    if (total == 0)
      continue;
    occurring.push_back(k);
    balance.push_back(2.0 * std::abs(0.5 - pos[k] / total));
  }

  const double m = static_cast<double>(clauses.size());
  fv.clause_var_ratio = m / static_cast<double>(occurring.size());
  fv.frac_binary = static_cast<double>(binary) / m;
  fv.frac_horn = static_cast<double>(horn) / m;

  const Stats b = summarize(balance);
  fv.posneg_var_max = b.max;
  fv.posneg_var_min = b.min;
  fv.posneg_var_mean = b.mean;
  fv.posneg_var_std = b.std;
  fv.posneg_var_variation = variation(b);

  const LpSolution lp = solve_lp_relaxation(f);
  report.lp_status = lp.status;
  if (lp.status == LpStatus::Optimal) {
    std::vector<double> slack;
    slack.reserve(occurring.size());
    for (Var k : occurring)
      slack.push_back(std::min(lp.values[k], 1.0 - lp.values[k]));
    const Stats s = summarize(slack);
    fv.lpslack_mean = s.mean;
    fv.lpslack_coeff_variation = variation(s);
  }
  return report;
}

} // namespace satml
