#pragma once

// Conflict-driven clause learning solver: two watched literals, exponential
// VSIDS, first-UIP learning, Luby restarts, LBD-aware clause database
// reduction and a configurable initial polarity source.

#include "satml/cnf.hpp"
#include "satml/hints.hpp"
#include "satml/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace satml {

enum class PolarityMode { AlwaysFalse, Hints };

struct SolverConfig {
  PolarityMode polarity_mode = PolarityMode::AlwaysFalse;
  bool phase_saving = true;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint64_t luby_base = 100;
  /// Reduce the learned database once it exceeds
  /// reduce_base + reduce_increment * (reductions so far).
  std::size_t reduce_base = 4000;
  std::size_t reduce_increment = 1000;
  /// Learned clauses with LBD at most this are never deleted.
  unsigned keep_lbd = 2;
  std::optional<std::uint64_t> conflict_budget;
  /// Probability of branching on a random variable; 0 keeps the variable
  /// order purely activity based.
  double random_var_freq = 0.0;
  std::uint64_t seed = 0;
  /// Check the asserting-clause property on every conflict.
  bool debug_checks = false;

  void validate() const;
};

enum class Verdict { Sat, Unsat, BudgetExhausted };

struct SolveStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t reductions = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  Verdict verdict = Verdict::BudgetExhausted;
  std::vector<bool> model; // model[v-1]; filled when Sat
  SolveStats stats;
};

using ClauseRef = std::uint32_t;

class Solver {
public:
  /// hints must cover every variable of f when polarity_mode is Hints.
  Solver(const Formula &f, SolverConfig cfg = {},
         const PolarityHints *hints = nullptr);

  SolveResult solve();

  // Step-level interface, used by tests.

  enum class Value : std::int8_t { False = 0, True = 1, Undef = 2 };

  /// Opens a new decision level and assigns `lit` true.
  void decide(Literal lit);
  /// Unit propagation to fixpoint. Returns the falsified clause on conflict.
  std::optional<ClauseRef> propagate();

  struct Analysis {
    std::vector<Literal> learned; // learned[0] is the first-UIP literal
    int backjump_level = 0;
  };
  /// First-UIP analysis of a conflict at decision level >= 1.
  Analysis analyze_conflict(ClauseRef conflict);

  /// Undoes all assignments above `level`.
  void backtrack(int level);

  Value value(Literal lit) const;
  int level(Var v) const { return level_[v - 1]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  std::span<const Literal> clause(ClauseRef c) const { return clauses_[c].lits; }
  std::span<const Literal> trail() const { return trail_; }
  /// True when the input already contains complementary unit clauses.
  bool inconsistent() const { return inconsistent_; }
  /// Learned clauses currently in the database.
  std::vector<std::vector<Literal>> learned_clauses() const;
  /// Every implied literal's reason is unit under the trail prefix before it,
  /// and every watched pair is consistent. Throws std::logic_error otherwise.
  void check_trail_invariants() const;

  const SolveStats &stats() const { return stats_; }

private:
  struct ClauseData {
    std::vector<Literal> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
    unsigned lbd = 0;
  };
  struct Watcher {
    ClauseRef cref;
    Literal blocker;
  };
  static constexpr ClauseRef kNoReason = static_cast<ClauseRef>(-1);

  /// Binary max-heap over variable indices, ordered by activity with the
  /// lower index winning ties.
  class VarHeap {
  public:
    explicit VarHeap(const std::vector<double> &activity) : act_(activity) {}
    void reserve(std::size_t n) { pos_.assign(n, -1); }
    bool empty() const { return heap_.empty(); }
    bool contains(std::uint32_t v) const { return pos_[v] >= 0; }
    void insert(std::uint32_t v);
    void increased(std::uint32_t v) { sift_up(static_cast<std::size_t>(pos_[v])); }
    std::uint32_t pop();
    std::span<const std::uint32_t> items() const { return heap_; }

  private:
    bool before(std::uint32_t a, std::uint32_t b) const {
      return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
    }
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);
    const std::vector<double> &act_;
    std::vector<std::uint32_t> heap_;
    std::vector<std::int64_t> pos_;
  };

  void enqueue(Literal lit, ClauseRef reason);
  ClauseRef add_clause_internal(std::vector<Literal> lits, bool learnt);
  void attach(ClauseRef c);
  void bump_var(std::uint32_t v);
  void bump_clause(ClauseData &c);
  void reduce_db();
  std::optional<Literal> pick_branch();
  enum class SearchStatus { Sat, Unsat, Restart, OutOfBudget };
  SearchStatus search(std::uint64_t conflict_limit);
  unsigned compute_lbd(std::span<const Literal> lits);
  void check_asserting(const Analysis &a) const;

  SolverConfig cfg_;
  Var num_vars_ = 0;
  bool inconsistent_ = false;

  std::vector<ClauseData> clauses_;
  std::vector<std::vector<Watcher>> watches_; // by literal code
  std::vector<std::int8_t> assigns_;          // by variable index
  std::vector<int> level_;
  std::vector<ClauseRef> reason_;
  std::vector<std::int8_t> saved_phase_; // -1 when nothing saved
  std::vector<bool> hint_phase_;
  std::vector<Literal> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  VarHeap heap_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::size_t num_learnt_ = 0;

  std::vector<char> seen_;
  std::vector<std::uint32_t> level_stamp_;
  std::uint32_t stamp_ = 0;
  Rng rng_;
  SolveStats stats_;
};

SolveResult solve(const Formula &f, const SolverConfig &cfg);
SolveResult solve(const Formula &f, const SolverConfig &cfg,
                  const PolarityHints &hints);

/// True iff every clause has a literal satisfied by the total assignment
/// model[v-1]. Throws when the model does not cover every variable.
bool check_model(const Formula &f, const std::vector<bool> &model);

/// The n-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t index);

/// `s SATISFIABLE|UNSATISFIABLE|UNKNOWN`, `v` model lines, then `key value`
/// statistics. wall_ms is included only when requested.
void write_solver_output(std::ostream &out, const SolveResult &r,
                         bool include_time);

} // namespace satml
