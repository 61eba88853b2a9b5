#pragma once

// Binary logistic regression over FeatureVector inputs.

#include "satml/features.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace satml {

using FeatureArray = std::array<double, kNumFeatures>;

struct Standardizer {
  FeatureArray mean{};
  FeatureArray scale = [] {
    FeatureArray a;
    a.fill(1.0);
    return a;
  }();

  FeatureArray apply(const FeatureArray &x) const;
  bool operator==(const Standardizer &) const = default;
};

struct Provenance {
  std::uint64_t instance = 0;
  std::uint64_t seed = 0;
  double fix_percent = 0;
  bool operator==(const Provenance &) const = default;
};

struct DatasetRow {
  FeatureVector features;
  int label = 0; // 1 = satisfiable
  Provenance provenance;
  bool operator==(const DatasetRow &) const = default;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  /// Rows dropped during labeling because the solver budget ran out.
  std::size_t dropped = 0;

  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
  /// FNV-1a over the canonical CSV serialization.
  std::uint64_t fingerprint() const;
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 2000;
  double l2_lambda = 1e-4;
  double convergence_tol = 1e-7;
};

struct LogisticModel {
  FeatureArray weights{};
  double bias = 0.0;
  Standardizer standardizer;

  // Metadata, carried through the model file as comments.
  TrainConfig config;
  std::uint64_t dataset_fingerprint = 0;
  std::size_t training_rows = 0;
  std::size_t epochs_run = 0;
  double final_loss = 0.0;
};

/// Numerically stable logistic function.
double sigmoid(double z);

Standardizer fit_standardizer(const Dataset &d);

struct LossGradient {
  double loss = 0.0;
  FeatureArray grad_weights{};
  double grad_bias = 0.0;
};

/// Mean cross-entropy plus (lambda/2)*|w|^2 over standardized features,
/// using m.standardizer, with its exact gradient. The bias is not
/// regularized.
LossGradient loss_and_gradient(const LogisticModel &m, const Dataset &d,
                               double l2_lambda);

/// Loss after every accepted step, starting with the loss at zero weights.
using LossTrace = std::vector<double>;

/// Full-batch proximal gradient descent from zero weights; steps that raise
/// the loss are retried at half the step size.
LogisticModel train(const Dataset &d, const TrainConfig &c,
                    LossTrace *trace = nullptr);

double predict_proba(const LogisticModel &m, const FeatureVector &x);

/// Fraction of rows whose thresholded (0.5) prediction matches the label.
double accuracy(const LogisticModel &m, std::span<const DatasetRow> rows);

void write_model(std::ostream &out, const LogisticModel &m);
LogisticModel read_model(std::istream &in);
void write_model_file(const std::string &path, const LogisticModel &m);
LogisticModel read_model_file(const std::string &path);

void write_dataset_csv(std::ostream &out, const Dataset &d);
Dataset read_dataset_csv(std::istream &in);
void write_dataset_file(const std::string &path, const Dataset &d);
Dataset read_dataset_file(const std::string &path);

} // namespace satml
