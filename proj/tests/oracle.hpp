#pragma once
// Brute-force reference computations for small formulae.

#include "satml/backbone.hpp"
#include "satml/cnf.hpp"
#include "satml/rng.hpp"

#include <stdexcept>
#include <vector>

namespace satml::oracle {

inline bool satisfies(const Formula &f, const std::vector<bool> &model) {
  for (const Clause &c : f.clauses()) {
    bool sat = false;
    for (Literal l : c)
      sat = sat || l.satisfied_by(model[l.index()]);
    if (!sat)
      return false;
  }
  return true;
}

inline std::vector<bool> assignment_from_bits(Var n, std::uint64_t bits) {
  std::vector<bool> a(n);
  for (Var k = 0; k < n; ++k)
    a[k] = ((bits >> k) & 1U) != 0;
  return a;
}

/// Every satisfying total assignment, in increasing bit order.
inline std::vector<std::vector<bool>> all_models(const Formula &f) {
  if (f.num_vars() > 20)
    throw std::invalid_argument("too many variables to enumerate");
  std::vector<std::vector<bool>> models;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars()); ++bits) {
    auto a = assignment_from_bits(f.num_vars(), bits);
    if (satisfies(f, a))
      models.push_back(std::move(a));
  }
  return models;
}

inline bool is_satisfiable(const Formula &f) { return !all_models(f).empty(); }

inline std::vector<BackboneStatus> backbone(const Formula &f) {
  const auto models = all_models(f);
  if (models.empty())
    throw std::invalid_argument("unsatisfiable");
  std::vector<BackboneStatus> status(f.num_vars());
  for (Var k = 0; k < f.num_vars(); ++k) {
    bool seen_true = false, seen_false = false;
    for (const auto &m : models)
      (m[k] ? seen_true : seen_false) = true;
    status[k] = seen_true && seen_false ? BackboneStatus::Free
                : seen_true             ? BackboneStatus::True
                                        : BackboneStatus::False;
  }
  return status;
}

/// Random 3-CNF with round(ratio * n) clauses.
inline Formula random_formula(Var n, double ratio, std::uint64_t seed) {
  return generate_random_3cnf(n, clauses_for_ratio(n, ratio), seed);
}

/// Pigeonhole formula: p pigeons into h holes, variable (i, j) = i*h + j + 1.
inline Formula pigeonhole(int p, int h) {
  std::vector<Clause> cs;
  auto var = [h](int i, int j) { return i * h + j + 1; };
  for (int i = 0; i < p; ++i) {
    std::vector<Literal> lits;
    for (int j = 0; j < h; ++j)
      lits.push_back(Literal::from_dimacs(var(i, j)));
    cs.emplace_back(lits);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        cs.push_back(Clause{-var(a, j), -var(b, j)});
  return Formula(static_cast<Var>(p * h), std::move(cs));
}

/// (x1 v x2 v x4) ^ (-x2 v x3 v -x4) ^ (x1 v -x3 v -x4)
inline Formula f0() {
  return Formula(4, {Clause{1, 2, 4}, Clause{-2, 3, -4}, Clause{1, -3, -4}});
}

} // namespace satml::oracle

#include "satml/logit.hpp"

#include <cmath>

namespace satml::oracle {

/// Random dataset of `rows` rows with raw features spread over a few orders
/// of magnitude and labels drawn from a noisy linear rule.
inline Dataset random_dataset(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  FeatureArray scale;
  for (double &s : scale)
    s = std::pow(10.0, rng.uniform() * 4 - 2);
  for (std::size_t i = 0; i < rows; ++i) {
    FeatureArray x;
    double z = 0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      x[k] = (rng.uniform() * 2 - 1) * scale[k];
      z += (k % 3 == 0 ? 1.0 : -0.5) * x[k] / scale[k];
    }
    DatasetRow r;
    r.features = FeatureVector::from_array(x);
    r.label = rng.uniform() < 1.0 / (1.0 + std::exp(-2 * z)) ? 1 : 0;
    r.provenance.instance = i;
    d.rows.push_back(r);
  }
  d.rows[0].label = 0;
  d.rows[1].label = 1;
  return d;
}

/// Relative error ||g - fd|| / max(||g||, ||fd||) between the analytic
/// gradient and central differences of the loss in every parameter.
inline double gradient_error(const LogisticModel &m, const Dataset &d,
                             double lambda, double h = 1e-5) {
  const LossGradient g = loss_and_gradient(m, d, lambda);
  double diff = 0, na = 0, nf = 0;
  for (std::size_t k = 0; k <= kNumFeatures; ++k) {
    LogisticModel plus = m, minus = m;
    double &pp = k < kNumFeatures ? plus.weights[k] : plus.bias;
    double &pm = k < kNumFeatures ? minus.weights[k] : minus.bias;
    pp += h;
    pm -= h;
    const double fd = (loss_and_gradient(plus, d, lambda).loss -
                       loss_and_gradient(minus, d, lambda).loss) /
                      (2 * h);
    const double a = k < kNumFeatures ? g.grad_weights[k] : g.grad_bias;
    diff += (a - fd) * (a - fd);
    na += a * a;
    nf += fd * fd;
  }
  const double denom = std::max(std::sqrt(std::max(na, nf)), 1e-12);
  return std::sqrt(diff) / denom;
}

} // namespace satml::oracle
