#include "satml/pipeline.hpp"
#include "satml/rng.hpp"
#include "satml/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace satml {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Seed-stream tags, so the fixing stream never aliases the instance stream.
constexpr std::uint64_t kInstanceTag = 0x696e7374;
constexpr std::uint64_t kFixingTag = 0x66697869;

} // namespace

void GenSpec::validate() const {
  if (num_vars < 3)
    throw std::invalid_argument("num_vars must be at least 3");
  if (!(clause_var_ratio > 0))
    throw std::invalid_argument("clause/variable ratio must be positive");
  if (fix_percents.empty())
    throw std::invalid_argument("at least one fix percentage is required");
  for (double n : fix_percents)
    if (!(n >= 0 && n <= 100))
      throw std::invalid_argument("fix percentages must lie in [0,100]");
}

std::uint64_t instance_seed(std::uint64_t root_seed, std::size_t instance) {
  return derive_seed(root_seed, kInstanceTag, instance);
}

Formula generate_instance(const GenSpec &spec, std::size_t instance) {
  return generate_random_3cnf(spec.num_vars,
                              clauses_for_ratio(spec.num_vars, spec.clause_var_ratio),
                              instance_seed(spec.seed, instance));
}

PartialAssignment dataset_fixing(const GenSpec &spec, std::size_t instance,
                                 std::size_t fix_index) {
  Rng rng(derive_seed(spec.seed, kFixingTag, instance, fix_index));
  std::vector<Var> pool(spec.num_vars);
  for (Var v = 1; v <= spec.num_vars; ++v)
    pool[v - 1] = v;
  PartialAssignment fixing(spec.num_vars);
  const std::size_t k = fixed_count(spec.fix_percents.at(fix_index), pool.size());
  for (std::size_t j = 0; j < k; ++j) {
    std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
    fixing.set(pool[j], rng.coin());
  }
  return fixing;
}

Dataset build_dataset(const GenSpec &spec) {
  spec.validate();
  SolverConfig label_cfg;
  label_cfg.conflict_budget = spec.label_conflict_budget;

  Dataset d;
  for (std::size_t i = 0; i < spec.num_instances; ++i) {
    const std::uint64_t seed = instance_seed(spec.seed, i);
    const Formula base = generate_instance(spec, i);
    for (std::size_t fi = 0; fi < spec.fix_percents.size(); ++fi) {
      const double n = spec.fix_percents[fi];
      const PartialAssignment fixing = dataset_fixing(spec, i, fi);

      DatasetRow row;
      row.provenance = {i, seed, n};
      const SimplifyOutcome outcome = apply_assignment(base, fixing);
      if (std::holds_alternative<Conflict>(outcome)) {
        row.label = 0;
      } else if (std::holds_alternative<Satisfied>(outcome)) {
        row.label = 1;
      } else {
        const Formula &residual = std::get<Residual>(outcome).formula;
        const FeatureReport fr = analyze_formula(residual);
        row.features = fr.features;
        if (fr.lp_status == LpStatus::Infeasible) {
          row.label = 0;
        } else {
          const SolveResult r = solve(residual, label_cfg);
          if (r.verdict == Verdict::BudgetExhausted) {
            ++d.dropped;
            continue;
          }
          row.label = r.verdict == Verdict::Sat ? 1 : 0;
        }
      }
      d.rows.push_back(row);
    }
  }
  return d;
}

DatasetSplit split_by_instance(const Dataset &d, std::size_t num_instances,
                               double test_fraction) {
  if (!(test_fraction >= 0 && test_fraction < 1))
    throw std::invalid_argument("test fraction must lie in [0,1)");
  const auto cut = static_cast<std::uint64_t>(
      std::floor((1.0 - test_fraction) * static_cast<double>(num_instances)));
  DatasetSplit s;
  for (const DatasetRow &r : d.rows)
    (r.provenance.instance >= cut ? s.test : s.train).rows.push_back(r);
  return s;
}

//===----------------------------------------------------------------------===//
// Benchmark
//===----------------------------------------------------------------------===//

const char *to_string(BenchMode m) {
  switch (m) {
  case BenchMode::MonteCarlo:
    return "mc";
  case BenchMode::SelfComparison:
    return "self";
  case BenchMode::Oracle:
    return "oracle";
  }
  return "?";
}

BenchMode parse_bench_mode(std::string_view s) {
  if (s == "mc")
    return BenchMode::MonteCarlo;
  if (s == "self")
    return BenchMode::SelfComparison;
  if (s == "oracle")
    return BenchMode::Oracle;
  throw std::invalid_argument("unknown bench mode '" + std::string(s) + "'");
}

const char *to_string(RowStatus s) {
  switch (s) {
  case RowStatus::Ok:
    return "ok";
  case RowStatus::BudgetDefault:
    return "budget_default";
  case RowStatus::BudgetHints:
    return "budget_hints";
  case RowStatus::BackboneFailed:
    return "backbone_failed";
  }
  return "?";
}

namespace {
RowStatus parse_row_status(std::string_view s) {
  for (RowStatus st : {RowStatus::Ok, RowStatus::BudgetDefault,
                       RowStatus::BudgetHints, RowStatus::BackboneFailed})
    if (s == to_string(st))
      return st;
  throw std::invalid_argument("unknown row status '" + std::string(s) + "'");
}
} // namespace

BenchSummary summarize(std::span<const BenchRow> rows) {
  BenchSummary s;
  s.rows = rows.size();
  double delta_sum = 0, macro_sum = 0;
  std::size_t wins = 0;
  for (const BenchRow &r : rows) {
    if (r.backbone_size && *r.backbone_size > 0) {
      ++s.backbone_instances;
      s.backbone_total += *r.backbone_size;
      s.backbone_matched += *r.backbone_matched;
      macro_sum += static_cast<double>(*r.backbone_matched) /
                   static_cast<double>(*r.backbone_size);
    }
    if (r.status != RowStatus::Ok) {
      ++s.flagged;
      continue;
    }
    if (r.conflicts_default == 0) {
      ++s.zero_conflict_default;
      continue;
    }
    ++s.compared;
    const auto cd = static_cast<double>(r.conflicts_default);
    const auto ch = static_cast<double>(r.conflicts_hints);
    delta_sum += (cd - ch) / cd;
    wins += r.conflicts_hints < r.conflicts_default ? 1 : 0;
  }
  if (s.compared > 0) {
    s.mean_conflict_delta_pct = 100.0 * delta_sum / static_cast<double>(s.compared);
    s.win_rate_pct =
        100.0 * static_cast<double>(wins) / static_cast<double>(s.compared);
  }
  if (s.backbone_total > 0) {
    s.backbone_micro = static_cast<double>(s.backbone_matched) /
                       static_cast<double>(s.backbone_total);
    s.backbone_macro = macro_sum / static_cast<double>(s.backbone_instances);
  }
  return s;
}

BenchReport run_benchmark(std::span<const BenchInstance> instances,
                          const LogisticModel &model, const BenchConfig &cfg) {
  cfg.mc.validate();
  SolverConfig base = cfg.solver;
  base.polarity_mode = PolarityMode::AlwaysFalse;

  BenchReport report;
  for (const BenchInstance &inst : instances) {
    const SolveResult filter = solve(inst.formula, base);
    if (filter.verdict != Verdict::Sat) {
      report.excluded.emplace_back(inst.id, filter.verdict == Verdict::Unsat
                                                ? "unsatisfiable"
                                                : "budget");
      continue;
    }

    BenchRow row;
    row.id = inst.id;

    PolarityHints hints;
    auto start = std::chrono::steady_clock::now();
    switch (cfg.mode) {
    case BenchMode::MonteCarlo:
      hints = compute_hints(model, inst.formula, cfg.mc);
      break;
    case BenchMode::Oracle:
      hints = PolarityHints::from_assignment(filter.model);
      break;
    case BenchMode::SelfComparison:
      hints.entries.resize(inst.formula.num_vars());
      break;
    }
    row.preprocessing_ms = elapsed_ms(start);

    const SolveResult with_default = solve(inst.formula, base);
    SolveResult with_hints;
    if (cfg.mode == BenchMode::SelfComparison) {
      with_hints = solve(inst.formula, base);
    } else {
      SolverConfig hcfg = cfg.solver;
      hcfg.polarity_mode = PolarityMode::Hints;
      with_hints = solve(inst.formula, hcfg, hints);
    }
    row.conflicts_default = with_default.stats.conflicts;
    row.conflicts_hints = with_hints.stats.conflicts;
    row.runtime_default_ms = with_default.stats.wall_ms;
    row.runtime_hints_ms = with_hints.stats.wall_ms;
    if (with_default.verdict == Verdict::BudgetExhausted)
      row.status = RowStatus::BudgetDefault;
    else if (with_hints.verdict == Verdict::BudgetExhausted)
      row.status = RowStatus::BudgetHints;

    if (cfg.with_backbone) {
      try {
        const BackboneReport bb = compute_backbone(inst.formula, base, true, inst.id);
        const HintScore hs = hint_accuracy(hints, bb);
        row.backbone_size = hs.backbone_size;
        row.backbone_matched = hs.matched;
      } catch (const BackboneError &) {
        if (row.status == RowStatus::Ok)
          row.status = RowStatus::BackboneFailed;
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.summary = summarize(report.rows);
  return report;
}

//===----------------------------------------------------------------------===//
// Report files
//===----------------------------------------------------------------------===//

namespace {
constexpr std::string_view kBenchHeader =
    "id,status,conflicts_default,conflicts_hints,backbone_size,backbone_matched";

std::string opt_to_string(const std::optional<std::size_t> &v) {
  return v ? std::to_string(*v) : std::string();
}
} // namespace

void write_bench_csv(std::ostream &out, const BenchReport &r) {
  out << kBenchHeader << '\n';
  for (const BenchRow &row : r.rows)
    out << row.id << ',' << to_string(row.status) << ',' << row.conflicts_default
        << ',' << row.conflicts_hints << ',' << opt_to_string(row.backbone_size)
        << ',' << opt_to_string(row.backbone_matched) << '\n';
}

std::vector<BenchRow> read_bench_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kBenchHeader)
    throw std::runtime_error("bench CSV header mismatch");
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto cells = split(line, ',');
    if (cells.size() != 6)
      throw std::runtime_error("bench CSV row has wrong column count: " + line);
    BenchRow row;
    row.id = std::string(cells[0]);
    row.status = parse_row_status(cells[1]);
    row.conflicts_default = parse_u64(cells[2]);
    row.conflicts_hints = parse_u64(cells[3]);
    if (!cells[4].empty())
      row.backbone_size = parse_u64(cells[4]);
    if (!cells[5].empty())
      row.backbone_matched = parse_u64(cells[5]);
    rows.push_back(row);
  }
  return rows;
}

void write_timing_csv(std::ostream &out, const BenchReport &r) {
  out << "id,preprocessing_ms,runtime_default_ms,runtime_hints_ms\n";
  double pre = 0, def = 0, hin = 0;
  for (const BenchRow &row : r.rows) {
    out << row.id << ',' << format_double(row.preprocessing_ms) << ','
        << format_double(row.runtime_default_ms) << ','
        << format_double(row.runtime_hints_ms) << '\n';
    pre += row.preprocessing_ms;
    def += row.runtime_default_ms;
    hin += row.runtime_hints_ms;
  }
  if (!r.rows.empty()) {
    const auto n = static_cast<double>(r.rows.size());
    out << "mean," << format_double(pre / n) << ',' << format_double(def / n) << ','
        << format_double(hin / n) << '\n';
  }
}

void write_bench_summary(std::ostream &out, const BenchReport &r,
                         const BenchConfig &cfg) {
  const BenchSummary &s = r.summary;
  out << "# paired conflict benchmark: default polarity (always false) vs hints\n";
  out << "mode " << to_string(cfg.mode) << '\n';
  out << "fix_percent " << format_double(cfg.mc.fix_percent) << '\n';
  out << "trials_per_literal " << cfg.mc.trials_per_literal << '\n';
  out << "mc_seed " << cfg.mc.root_seed << '\n';
  out << "solver_seed " << cfg.solver.seed << '\n';
  out << "phase_saving " << (cfg.solver.phase_saving ? "on" : "off") << '\n';
  out << "conflict_budget "
      << (cfg.solver.conflict_budget ? std::to_string(*cfg.solver.conflict_budget)
                                     : std::string("none"))
      << '\n';
  out << "instances_satisfiable " << s.rows << '\n';
  out << "instances_excluded " << r.excluded.size() << '\n';
  for (const auto &[id, why] : r.excluded)
    out << "# excluded " << id << ' ' << why << '\n';
  out << "rows_flagged " << s.flagged << '\n';
  out << "rows_zero_conflict_default " << s.zero_conflict_default << '\n';
  out << "rows_compared " << s.compared << '\n';
  out << "mean_conflict_delta_pct " << format_double(s.mean_conflict_delta_pct) << '\n';
  out << "win_rate_pct " << format_double(s.win_rate_pct) << '\n';
  out << "reference_mean_conflict_delta_pct "
      << format_double(kReferenceConflictDeltaPct) << '\n';
  out << "reference_win_rate_pct " << format_double(kReferenceWinRatePct) << '\n';
  if (s.backbone_micro) {
    out << "backbone_instances " << s.backbone_instances << '\n';
    out << "backbone_micro_accuracy " << format_double(*s.backbone_micro) << '\n';
    out << "backbone_macro_accuracy " << format_double(*s.backbone_macro) << '\n';
  }
}

std::vector<BenchInstance> load_corpus(const std::string &dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> paths;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cnf")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<BenchInstance> out;
  for (const fs::path &p : paths)
    out.push_back({p.stem().string(), read_dimacs_file(p.string())});
  return out;
}

} // namespace satml
