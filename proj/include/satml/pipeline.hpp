#pragma once

// Dataset construction for the satisfiability model and the paired
// default-versus-hints solver benchmark.

#include "satml/backbone.hpp"
#include "satml/logit.hpp"
#include "satml/mc_polarity.hpp"
#include "satml/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace satml {

struct GenSpec {
  std::size_t num_instances = 2000;
  Var num_vars = 150;
  double clause_var_ratio = kDefaultClauseVarRatio;
  std::vector<double> fix_percents{0.0, 2.0, 4.0};
  std::uint64_t seed = 1;
  std::uint64_t label_conflict_budget = 1'000'000;

  void validate() const;
};

std::uint64_t instance_seed(std::uint64_t root_seed, std::size_t instance);
Formula generate_instance(const GenSpec &spec, std::size_t instance);

/// The random fixing applied to base instance `instance` for
/// spec.fix_percents[fix_index].
PartialAssignment dataset_fixing(const GenSpec &spec, std::size_t instance,
                                 std::size_t fix_index);

/// For every base instance and fix percentage: fix floor(n/100 * num_vars)
/// random variables to random values, simplify, label the residual
/// (conflict 0, satisfied 1, otherwise by the solver) and featurize it.
/// Satisfied and conflicting residuals carry the zero-clause feature
/// sentinel. Rows whose label solve exceeds the budget are dropped and
/// counted in Dataset::dropped.
Dataset build_dataset(const GenSpec &spec);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Splits by base instance so that a formula and its fixed variants land on
/// the same side: instances with id >= (1 - test_fraction) * num_instances
/// are held out.
DatasetSplit split_by_instance(const Dataset &d, std::size_t num_instances,
                               double test_fraction = 0.2);

//===----------------------------------------------------------------------===//
// Benchmark
//===----------------------------------------------------------------------===//

enum class BenchMode {
  MonteCarlo,     // hints from compute_hints
  SelfComparison, // both runs use the always-false baseline
  Oracle,         // hints replay the model found by the filtering solve
};

const char *to_string(BenchMode m);
BenchMode parse_bench_mode(std::string_view s);

struct BenchConfig {
  BenchMode mode = BenchMode::MonteCarlo;
  McConfig mc;
  SolverConfig solver;
  bool with_backbone = false;
};

struct BenchInstance {
  std::string id;
  Formula formula;
};

enum class RowStatus { Ok, BudgetDefault, BudgetHints, BackboneFailed };
const char *to_string(RowStatus s);

struct BenchRow {
  std::string id;
  RowStatus status = RowStatus::Ok;
  std::uint64_t conflicts_default = 0;
  std::uint64_t conflicts_hints = 0;
  std::optional<std::size_t> backbone_size;
  std::optional<std::size_t> backbone_matched;
  // Wall-clock timings in milliseconds; written to the separate timing CSV.
  double preprocessing_ms = 0;
  double runtime_default_ms = 0;
  double runtime_hints_ms = 0;

  bool operator==(const BenchRow &) const = default;
};

struct BenchSummary {
  std::size_t rows = 0;
  std::size_t compared = 0;        // Ok rows with conflicts_default > 0
  std::size_t zero_conflict_default = 0;
  std::size_t flagged = 0;         // rows with a non-Ok status
  double mean_conflict_delta_pct = 0;
  double win_rate_pct = 0;
  std::size_t backbone_instances = 0; // rows with a nonempty backbone
  std::size_t backbone_matched = 0;
  std::size_t backbone_total = 0;
  std::optional<double> backbone_micro;
  std::optional<double> backbone_macro;
  bool operator==(const BenchSummary &) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Instances dropped by the satisfiability filter, with the reason.
  std::vector<std::pair<std::string, std::string>> excluded;
  BenchSummary summary;
};

BenchSummary summarize(std::span<const BenchRow> rows);

BenchReport run_benchmark(std::span<const BenchInstance> instances,
                          const LogisticModel &model, const BenchConfig &cfg);

/// Deterministic columns only (ids, conflict counts, backbone counts).
void write_bench_csv(std::ostream &out, const BenchReport &r);
std::vector<BenchRow> read_bench_csv(std::istream &in);
void write_timing_csv(std::ostream &out, const BenchReport &r);
void write_bench_summary(std::ostream &out, const BenchReport &r,
                         const BenchConfig &cfg);

/// Reference figures for the conflict comparison on 300-variable formulae.
inline constexpr double kReferenceConflictDeltaPct = 23.0;
inline constexpr double kReferenceWinRatePct = 55.0;

/// DIMACS files in a directory, sorted by file name.
std::vector<BenchInstance> load_corpus(const std::string &dir);

} // namespace satml
