// Command-line front end: corpus generation, dataset construction, model
// training and prediction, polarity hints, solving, backbones and the
// paired benchmark.

#include "satml/backbone.hpp"
#include "satml/cnf.hpp"
#include "satml/logit.hpp"
#include "satml/mc_polarity.hpp"
#include "satml/pipeline.hpp"
#include "satml/solver.hpp"
#include "satml/text.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

using namespace satml;

namespace {

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  return out;
}

std::string instance_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "inst_%05zu.cnf", i);
  return buf;
}

void print_split_accuracy(std::ostream &out, const LogisticModel &m,
                          const Dataset &d, const char *label) {
  std::map<double, std::vector<DatasetRow>> by_fix;
  for (const DatasetRow &r : d.rows)
    by_fix[r.provenance.fix_percent].push_back(r);
  out << label << "_rows " << d.size() << '\n';
  out << label << "_accuracy " << format_double(accuracy(m, d.rows)) << '\n';
  for (const auto &[fix, rows] : by_fix)
    out << label << "_accuracy_fix_" << format_double(fix) << ' '
        << format_double(accuracy(m, rows)) << '\n';
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Satisfiability prediction, Monte-Carlo polarity hints and a CDCL solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "satml 1.0");

  // gen
  std::size_t gen_count = 10;
  Var gen_vars = 150;
  double gen_ratio = kDefaultClauseVarRatio;
  std::uint64_t seed = 1;
  std::string out_path;
  auto *gen = app.add_subcommand("gen", "Write a corpus of random 3-CNF DIMACS files");
  gen->add_option("--count", gen_count, "Number of formulae")->capture_default_str();
  gen->add_option("--vars", gen_vars, "Variables per formula")->capture_default_str();
  gen->add_option("--ratio", gen_ratio, "Clause/variable ratio")->capture_default_str();
  gen->add_option("--seed", seed, "Root seed")->capture_default_str();
  gen->add_option("--out", out_path, "Output directory")->required();

  // dataset
  GenSpec spec;
  auto *dataset = app.add_subcommand("dataset", "Build the labeled feature CSV");
  dataset->add_option("--instances", spec.num_instances, "Base formulae")->capture_default_str();
  dataset->add_option("--vars", spec.num_vars, "Variables per formula")->capture_default_str();
  dataset->add_option("--ratio", spec.clause_var_ratio, "Clause/variable ratio")->capture_default_str();
  dataset->add_option("--fix", spec.fix_percents, "Fix percentages")->delimiter(',')->capture_default_str();
  dataset->add_option("--budget", spec.label_conflict_budget, "Conflict budget per label solve")->capture_default_str();
  dataset->add_option("--seed", seed, "Root seed")->capture_default_str();
  dataset->add_option("--out", out_path, "Output CSV")->required();
  bool full_scale = false;
  dataset->add_flag("--full-scale", full_scale, "Use 300-variable formulae");

  // train
  TrainConfig tc;
  std::string data_path;
  double holdout = 0.2;
  auto *trainc = app.add_subcommand("train", "Fit the logistic model on a dataset CSV");
  trainc->add_option("--data", data_path, "Dataset CSV")->required();
  trainc->add_option("--out", out_path, "Model file")->required();
  trainc->add_option("--lr", tc.learning_rate, "Learning rate")->capture_default_str();
  trainc->add_option("--epochs", tc.epochs, "Maximum epochs")->capture_default_str();
  trainc->add_option("--lambda", tc.l2_lambda, "L2 strength")->capture_default_str();
  trainc->add_option("--tol", tc.convergence_tol, "Gradient-norm tolerance")->capture_default_str();
  trainc->add_option("--holdout", holdout, "Fraction of base instances held out")->capture_default_str();
  trainc->add_option("--seed", seed, "Unused; accepted for uniformity");

  // predict
  std::string model_path, cnf_path;
  auto *predict = app.add_subcommand("predict", "Probability that a formula is satisfiable");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("cnf", cnf_path, "DIMACS file")->required();

  // hints
  McConfig mc;
  auto *hintsc = app.add_subcommand("hints", "Monte-Carlo polarity hints");
  hintsc->add_option("--model", model_path, "Model file")->required();
  hintsc->add_option("cnf", cnf_path, "DIMACS file")->required();
  hintsc->add_option("--fix", mc.fix_percent, "Percent of variables fixed per trial")->capture_default_str();
  hintsc->add_option("--trials", mc.trials_per_literal, "Trials per literal")->capture_default_str();
  hintsc->add_option("--seed", seed, "Root seed")->capture_default_str();
  hintsc->add_option("--out", out_path, "Hints file")->required();

  // solve
  SolverConfig sc;
  std::string hints_path;
  bool no_phase_saving = false, with_time = false;
  std::uint64_t budget = 0;
  auto *solvec = app.add_subcommand("solve", "Run the CDCL solver (exit 10 SAT, 20 UNSAT)");
  solvec->add_option("cnf", cnf_path, "DIMACS file")->required();
  solvec->add_option("--hints", hints_path, "Hints file for the initial polarity");
  solvec->add_flag("--no-phase-saving", no_phase_saving, "Use the hint/false polarity on every decision");
  solvec->add_option("--budget", budget, "Conflict budget (0 = none)");
  solvec->add_option("--seed", seed, "Solver seed")->capture_default_str();
  solvec->add_option("--out", out_path, "Write output here instead of stdout");
  solvec->add_flag("--time", with_time, "Include wall-clock time");

  // backbone
  bool no_filter = false;
  auto *backbonec = app.add_subcommand("backbone", "Compute the backbone of a satisfiable formula");
  backbonec->add_option("cnf", cnf_path, "DIMACS file")->required();
  backbonec->add_option("--out", out_path, "Report file")->required();
  backbonec->add_flag("--no-filter", no_filter, "Test every variable with its own solver call");
  backbonec->add_option("--seed", seed, "Solver seed")->capture_default_str();

  // bench
  std::string corpus, summary_path, timing_path, mode = "mc";
  bool with_backbone = false;
  auto *benchc = app.add_subcommand("bench", "Paired default vs hints conflict benchmark");
  benchc->add_option("--corpus", corpus, "Directory of .cnf files")->required();
  benchc->add_option("--model", model_path, "Model file")->required();
  benchc->add_option("--out", out_path, "Report CSV")->required();
  benchc->add_option("--summary", summary_path, "Summary file (default: stdout)");
  benchc->add_option("--timing", timing_path, "Wall-clock timing CSV");
  benchc->add_option("--mode", mode, "mc | self | oracle")->capture_default_str();
  benchc->add_flag("--backbone", with_backbone, "Score hints against each backbone");
  benchc->add_option("--fix", mc.fix_percent, "Percent of variables fixed per trial")->capture_default_str();
  benchc->add_option("--trials", mc.trials_per_literal, "Trials per literal")->capture_default_str();
  benchc->add_option("--budget", budget, "Conflict budget per solve (0 = none)");
  benchc->add_flag("--no-phase-saving", no_phase_saving, "Disable phase saving in both runs");
  benchc->add_option("--seed", seed, "Seed for hints and solver")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::filesystem::create_directories(out_path);
      const std::size_t clauses = clauses_for_ratio(gen_vars, gen_ratio);
      for (std::size_t i = 0; i < gen_count; ++i)
        write_dimacs_file((std::filesystem::path(out_path) / instance_name(i)).string(),
                          generate_random_3cnf(gen_vars, clauses, instance_seed(seed, i)));
      return 0;
    }
    if (*dataset) {
      spec.seed = seed;
      if (full_scale)
        spec.num_vars = 300;
      const Dataset d = build_dataset(spec);
      write_dataset_file(out_path, d);
      std::size_t sat = 0;
      for (const DatasetRow &r : d.rows)
        sat += r.label;
      std::cout << "rows " << d.size() << "\nsatisfiable " << sat << "\ndropped "
                << d.dropped << '\n';
      return 0;
    }
    if (*trainc) {
      const Dataset d = read_dataset_file(data_path);
      std::uint64_t instances = 0;
      for (const DatasetRow &r : d.rows)
        instances = std::max(instances, r.provenance.instance + 1);
      const DatasetSplit split = split_by_instance(d, instances, holdout);
      const LogisticModel m = train(split.train, tc);
      write_model_file(out_path, m);
      std::cout << "epochs_run " << m.epochs_run << "\nfinal_loss "
                << format_double(m.final_loss) << '\n';
      print_split_accuracy(std::cout, m, split.train, "train");
      if (!split.test.empty())
        print_split_accuracy(std::cout, m, split.test, "test");
      return 0;
    }
    if (*predict) {
      const LogisticModel m = read_model_file(model_path);
      const Formula f = read_dimacs_file(cnf_path);
      const FeatureReport fr = analyze_formula(f);
      const double p =
          fr.lp_status == LpStatus::Infeasible ? 0.0 : predict_proba(m, fr.features);
      std::cout << format_double(p) << '\n';
      return 0;
    }
    if (*hintsc) {
      mc.root_seed = seed;
      const LogisticModel m = read_model_file(model_path);
      const Formula f = read_dimacs_file(cnf_path);
      write_hints_file(out_path, compute_hints(m, f, mc));
      return 0;
    }
    if (*solvec) {
      sc.seed = seed;
      sc.phase_saving = !no_phase_saving;
      if (budget > 0)
        sc.conflict_budget = budget;
      const Formula f = read_dimacs_file(cnf_path);
      SolveResult r;
      if (!hints_path.empty())
        r = solve(f, sc, read_hints_file(hints_path));
      else
        r = solve(f, sc);
      if (out_path.empty()) {
        write_solver_output(std::cout, r, with_time);
      } else {
        auto out = open_out(out_path);
        write_solver_output(out, r, with_time);
      }
      return r.verdict == Verdict::Sat ? 10 : r.verdict == Verdict::Unsat ? 20 : 0;
    }
    if (*backbonec) {
      sc.seed = seed;
      const Formula f = read_dimacs_file(cnf_path);
      const BackboneReport r = compute_backbone(f, sc, !no_filter, cnf_path);
      auto out = open_out(out_path);
      write_backbone(out, r);
      return 0;
    }
    if (*benchc) {
      BenchConfig cfg;
      cfg.mode = parse_bench_mode(mode);
      cfg.mc = mc;
      cfg.mc.root_seed = seed;
      cfg.solver.seed = seed;
      cfg.solver.phase_saving = !no_phase_saving;
      if (budget > 0)
        cfg.solver.conflict_budget = budget;
      cfg.with_backbone = with_backbone;
      const LogisticModel m = read_model_file(model_path);
      const auto instances = load_corpus(corpus);
      const BenchReport r = run_benchmark(instances, m, cfg);
      {
        auto out = open_out(out_path);
        write_bench_csv(out, r);
      }
      if (!timing_path.empty()) {
        auto out = open_out(timing_path);
        write_timing_csv(out, r);
      }
      if (summary_path.empty()) {
        write_bench_summary(std::cout, r, cfg);
      } else {
        auto out = open_out(summary_path);
        write_bench_summary(out, r, cfg);
      }
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
