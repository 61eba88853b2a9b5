#include "satml/solver.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>
#include <string>

namespace satml {

namespace {
constexpr std::int8_t kUndef = 2;
constexpr double kActivityLimit = 1e100;
} // namespace

void SolverConfig::validate() const {
  if (!(var_decay > 0 && var_decay < 1))
    throw std::invalid_argument("var_decay must lie in (0,1)");
  if (!(clause_decay > 0 && clause_decay < 1))
    throw std::invalid_argument("clause_decay must lie in (0,1)");
  if (luby_base < 1)
    throw std::invalid_argument("Luby base must be at least 1");
  if (!(random_var_freq >= 0 && random_var_freq <= 1))
    throw std::invalid_argument("random_var_freq must lie in [0,1]");
}

std::uint64_t luby(std::uint64_t index) {
  // Find the finite subsequence containing index, then descend into it.
  std::uint64_t size = 1;
  unsigned seq = 0;
  while (size < index + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != index) {
    size = (size - 1) >> 1;
    --seq;
    index %= size;
  }
  return std::uint64_t{1} << seq;
}

//===----------------------------------------------------------------------===//
// Variable heap
//===----------------------------------------------------------------------===//

void Solver::VarHeap::insert(std::uint32_t v) {
  if (contains(v))
    return;
  pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  sift_up(heap_.size() - 1);
}

std::uint32_t Solver::VarHeap::pop() {
  const std::uint32_t top = heap_.front();
  heap_.front() = heap_.back();
  pos_[heap_.front()] = 0;
  heap_.pop_back();
  pos_[top] = -1;
  if (!heap_.empty())
    sift_down(0);
  return top;
}

void Solver::VarHeap::sift_up(std::size_t i) {
  const std::uint32_t v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!before(v, heap_[parent]))
      break;
    heap_[i] = heap_[parent];
    pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  pos_[v] = static_cast<std::int64_t>(i);
}

void Solver::VarHeap::sift_down(std::size_t i) {
  const std::uint32_t v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size())
      break;
    if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child]))
      ++child;
    if (!before(heap_[child], v))
      break;
    heap_[i] = heap_[child];
    pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  pos_[v] = static_cast<std::int64_t>(i);
}

//===----------------------------------------------------------------------===//
// Construction
//===----------------------------------------------------------------------===//

Solver::Solver(const Formula &f, SolverConfig cfg, const PolarityHints *hints)
    : cfg_(cfg), num_vars_(f.num_vars()), heap_(activity_), rng_(cfg.seed) {
  cfg_.validate();
  const std::size_t n = num_vars_;
  watches_.resize(2 * n);
  assigns_.assign(n, kUndef);
  level_.assign(n, 0);
  reason_.assign(n, kNoReason);
  saved_phase_.assign(n, -1);
  activity_.assign(n, 0.0);
  seen_.assign(n, 0);
  level_stamp_.assign(n + 1, 0);
  heap_.reserve(n);
  for (std::uint32_t v = 0; v < n; ++v)
    heap_.insert(v);

  if (cfg_.polarity_mode == PolarityMode::Hints) {
    if (!hints)
      throw std::invalid_argument("hints polarity mode requires hints");
    if (hints->num_vars() < num_vars_)
      throw std::invalid_argument("hints do not cover every variable");
    hint_phase_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
      hint_phase_[v] = hints->entries[v].value;
      if (cfg_.phase_saving)
        saved_phase_[v] = hint_phase_[v] ? 1 : 0;
    }
  }

  std::vector<Literal> units;
  for (const Clause &c : f.clauses()) {
    if (c.size() == 1)
      units.push_back(c[0]);
    else
      add_clause_internal(std::vector<Literal>(c.begin(), c.end()), false);
  }
  for (Literal u : units) {
    const Value val = value(u);
    if (val == Value::False)
      inconsistent_ = true;
    else if (val == Value::Undef)
      enqueue(u, kNoReason);
  }
}

ClauseRef Solver::add_clause_internal(std::vector<Literal> lits, bool learnt) {
  const auto cref = static_cast<ClauseRef>(clauses_.size());
  ClauseData cd;
  cd.lits = std::move(lits);
  cd.learnt = learnt;
  clauses_.push_back(std::move(cd));
  attach(cref);
  if (learnt)
    ++num_learnt_;
  return cref;
}

void Solver::attach(ClauseRef c) {
  const auto &lits = clauses_[c].lits;
  watches_[lits[0].code()].push_back({c, lits[1]});
  watches_[lits[1].code()].push_back({c, lits[0]});
}

//===----------------------------------------------------------------------===//
// Assignment and propagation
//===----------------------------------------------------------------------===//

Solver::Value Solver::value(Literal lit) const {
  const std::int8_t a = assigns_[lit.index()];
  if (a == kUndef)
    return Value::Undef;
  return (a == 1) == lit.positive() ? Value::True : Value::False;
}

void Solver::enqueue(Literal lit, ClauseRef reason) {
  const std::uint32_t v = lit.index();
  assigns_[v] = lit.positive() ? 1 : 0;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(lit);
}

void Solver::decide(Literal lit) {
  if (value(lit) != Value::Undef)
    throw std::logic_error("decision on an assigned variable");
  trail_lim_.push_back(trail_.size());
  enqueue(lit, kNoReason);
}

std::optional<ClauseRef> Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Literal p = trail_[qhead_++];
    const Literal false_lit = ~p;
    auto &ws = watches_[false_lit.code()];
    ++stats_.propagations;

    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == Value::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto &lits = clauses_[w.cref].lits;
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      ++i;
      const Literal first = lits[0];
      if (first != w.blocker && value(first) == Value::True) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != Value::False) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1].code()].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved)
        continue;

      ws[j++] = {w.cref, first};
      if (value(first) == Value::False) {
        while (i < ws.size())
          ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return std::nullopt;
}

void Solver::backtrack(int level) {
  if (decision_level() <= level)
    return;
  const std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t i = trail_.size(); i-- > stop;) {
    const std::uint32_t v = trail_[i].index();
    if (cfg_.phase_saving)
      saved_phase_[v] = assigns_[v];
    assigns_[v] = kUndef;
    reason_[v] = kNoReason;
    heap_.insert(v);
  }
  trail_.resize(stop);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
}

//===----------------------------------------------------------------------===//
// Conflict analysis
//===----------------------------------------------------------------------===//

void Solver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > kActivityLimit) {
    for (double &a : activity_)
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_.contains(v))
    heap_.increased(v);
}

void Solver::bump_clause(ClauseData &c) {
  c.activity += clause_inc_;
  if (c.activity > kActivityLimit) {
    for (ClauseData &d : clauses_)
      if (d.learnt)
        d.activity *= 1e-100;
    clause_inc_ *= 1e-100;
  }
}

Solver::Analysis Solver::analyze_conflict(ClauseRef conflict) {
  if (decision_level() == 0)
    throw std::logic_error("conflict analysis at decision level 0");
  Analysis out;
  out.learned.push_back(Literal{}); // slot for the UIP
  int path = 0;
  std::optional<Literal> p;
  std::size_t index = trail_.size();
  ClauseRef confl = conflict;

  do {
    ClauseData &c = clauses_[confl];
    if (c.learnt)
      bump_clause(c);
    for (std::size_t k = p ? 1 : 0; k < c.lits.size(); ++k) {
      const Literal q = c.lits[k];
      const std::uint32_t v = q.index();
      if (seen_[v] || level_[v] == 0)
        continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] >= decision_level())
        ++path;
      else
        out.learned.push_back(q);
    }
    while (!seen_[trail_[--index].index()]) {
    }
    p = trail_[index];
    confl = reason_[p->index()];
    seen_[p->index()] = 0;
    --path;
  } while (path > 0);
  out.learned[0] = ~*p;

  for (std::size_t k = 1; k < out.learned.size(); ++k)
    seen_[out.learned[k].index()] = 0;

  if (out.learned.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < out.learned.size(); ++k)
      if (level_[out.learned[k].index()] > level_[out.learned[max_i].index()])
        max_i = k;
    std::swap(out.learned[1], out.learned[max_i]);
    out.backjump_level = level_[out.learned[1].index()];
  }
  return out;
}

void Solver::check_asserting(const Analysis &a) const {
  int at_current = 0;
  for (Literal l : a.learned) {
    if (value(l) != Value::False)
      throw std::logic_error("learned clause is not falsified by the trail");
    if (level_[l.index()] == decision_level())
      ++at_current;
    else if (level_[l.index()] > a.backjump_level)
      throw std::logic_error("learned literal above the backjump level");
  }
  if (at_current != 1)
    throw std::logic_error("learned clause does not have exactly one UIP literal");
}

unsigned Solver::compute_lbd(std::span<const Literal> lits) {
  ++stamp_;
  unsigned lbd = 0;
  for (Literal l : lits) {
    const auto lv = static_cast<std::size_t>(level_[l.index()]);
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++lbd;
    }
  }
  return lbd;
}

//===----------------------------------------------------------------------===//
// Search
//===----------------------------------------------------------------------===//

void Solver::reduce_db() {
  std::vector<ClauseRef> candidates;
  for (ClauseRef c = 0; c < clauses_.size(); ++c) {
    const ClauseData &cd = clauses_[c];
    if (!cd.learnt || cd.deleted || cd.lbd <= cfg_.keep_lbd)
      continue;
    const Literal first = cd.lits[0];
    const bool locked =
        reason_[first.index()] == c && value(first) == Value::True;
    if (!locked)
      candidates.push_back(c);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ClauseRef a, ClauseRef b) {
                     return clauses_[a].activity < clauses_[b].activity;
                   });
  const std::size_t remove = candidates.size() / 2;
  for (std::size_t k = 0; k < remove; ++k) {
    ClauseData &cd = clauses_[candidates[k]];
    cd.deleted = true;
    cd.lits.clear();
    cd.lits.shrink_to_fit();
    --num_learnt_;
  }
  for (auto &ws : watches_)
    std::erase_if(ws, [&](const Watcher &w) { return clauses_[w.cref].deleted; });
  ++stats_.reductions;
}

std::optional<Literal> Solver::pick_branch() {
  std::optional<std::uint32_t> next;
  if (cfg_.random_var_freq > 0 && !heap_.empty() &&
      rng_.uniform() < cfg_.random_var_freq) {
    const auto items = heap_.items();
    const std::uint32_t v = items[rng_.below(items.size())];
    if (assigns_[v] == kUndef)
      next = v;
  }
  while (!next) {
    if (heap_.empty())
      return std::nullopt;
    const std::uint32_t v = heap_.pop();
    if (assigns_[v] == kUndef)
      next = v;
  }
  const std::uint32_t v = *next;
  bool polarity = false;
  if (cfg_.phase_saving && saved_phase_[v] >= 0)
    polarity = saved_phase_[v] == 1;
  else if (cfg_.polarity_mode == PolarityMode::Hints)
    polarity = hint_phase_[v];
  return Literal(v + 1, !polarity);
}

Solver::SearchStatus Solver::search(std::uint64_t conflict_limit) {
  std::uint64_t local_conflicts = 0;
  for (;;) {
    if (auto confl = propagate()) {
      ++stats_.conflicts;
      ++local_conflicts;
      if (decision_level() == 0)
        return SearchStatus::Unsat;
      Analysis a = analyze_conflict(*confl);
      if (cfg_.debug_checks)
        check_asserting(a);
      backtrack(a.backjump_level);
      if (a.learned.size() == 1) {
        enqueue(a.learned[0], kNoReason);
      } else {
        const unsigned lbd = compute_lbd(a.learned);
        const Literal uip = a.learned[0];
        const ClauseRef cref = add_clause_internal(std::move(a.learned), true);
        clauses_[cref].lbd = lbd;
        bump_clause(clauses_[cref]);
        enqueue(uip, cref);
      }
      var_inc_ /= cfg_.var_decay;
      clause_inc_ /= cfg_.clause_decay;
      if (cfg_.conflict_budget && stats_.conflicts >= *cfg_.conflict_budget)
        return SearchStatus::OutOfBudget;
      continue;
    }

    if (local_conflicts >= conflict_limit) {
      backtrack(0);
      ++stats_.restarts;
      return SearchStatus::Restart;
    }
    if (num_learnt_ >
        cfg_.reduce_base + cfg_.reduce_increment * stats_.reductions)
      reduce_db();

    const auto next = pick_branch();
    if (!next)
      return SearchStatus::Sat;
    ++stats_.decisions;
    decide(*next);
  }
}

SolveResult Solver::solve() {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  auto finish = [&](Verdict v) {
    result.verdict = v;
    if (v == Verdict::Sat) {
      result.model.resize(num_vars_);
      for (std::uint32_t k = 0; k < num_vars_; ++k)
        result.model[k] = assigns_[k] == 1;
    }
    stats_.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.stats = stats_;
    return result;
  };

  if (inconsistent_)
    return finish(Verdict::Unsat);
  if (propagate())
    return finish(Verdict::Unsat);

  for (std::uint64_t restart = 0;; ++restart) {
    const std::uint64_t limit = luby(restart) * cfg_.luby_base;
    switch (search(limit)) {
    case SearchStatus::Sat:
      return finish(Verdict::Sat);
    case SearchStatus::Unsat:
      return finish(Verdict::Unsat);
    case SearchStatus::OutOfBudget:
      return finish(Verdict::BudgetExhausted);
    case SearchStatus::Restart:
      break;
    }
  }
}

std::vector<std::vector<Literal>> Solver::learned_clauses() const {
  std::vector<std::vector<Literal>> out;
  for (const ClauseData &c : clauses_)
    if (c.learnt && !c.deleted)
      out.push_back(c.lits);
  return out;
}

void Solver::check_trail_invariants() const {
  std::vector<std::size_t> pos(num_vars_, trail_.size());
  for (std::size_t i = 0; i < trail_.size(); ++i)
    pos[trail_[i].index()] = i;
  for (std::size_t i = 0; i < trail_.size(); ++i) {
    const ClauseRef r = reason_[trail_[i].index()];
    if (r == kNoReason)
      continue;
    const auto &lits = clauses_[r].lits;
    if (lits[0] != trail_[i])
      throw std::logic_error("reason clause does not start with its implied literal");
    for (std::size_t k = 1; k < lits.size(); ++k)
      if (value(lits[k]) != Value::False || pos[lits[k].index()] >= i)
        throw std::logic_error("reason clause is not unit under the trail prefix");
  }
  if (qhead_ < trail_.size())
    return; // watches are only settled after propagation completes
  for (ClauseRef c = 0; c < clauses_.size(); ++c) {
    const ClauseData &cd = clauses_[c];
    if (cd.deleted)
      continue;
    const bool w0_false = value(cd.lits[0]) == Value::False;
    const bool w1_false = value(cd.lits[1]) == Value::False;
    if (!w0_false && !w1_false)
      continue;
    const bool satisfied = std::any_of(cd.lits.begin(), cd.lits.end(), [&](Literal l) {
      return value(l) == Value::True;
    });
    const auto unassigned = std::count_if(cd.lits.begin(), cd.lits.end(), [&](Literal l) {
      return value(l) == Value::Undef;
    });
    if (!satisfied && unassigned > 0)
      throw std::logic_error("watched literal falsified in an open clause");
  }
}

//===----------------------------------------------------------------------===//
// Free functions
//===----------------------------------------------------------------------===//

SolveResult solve(const Formula &f, const SolverConfig &cfg) {
  if (cfg.polarity_mode == PolarityMode::Hints)
    throw std::invalid_argument("hints polarity mode requires hints");
  return Solver(f, cfg).solve();
}

SolveResult solve(const Formula &f, const SolverConfig &cfg,
                  const PolarityHints &hints) {
  SolverConfig c = cfg;
  c.polarity_mode = PolarityMode::Hints;
  return Solver(f, c, &hints).solve();
}

bool check_model(const Formula &f, const std::vector<bool> &model) {
  if (model.size() < f.num_vars())
    throw std::invalid_argument("model does not cover every variable");
  for (const Clause &c : f.clauses()) {
    const bool sat = std::any_of(c.begin(), c.end(), [&](Literal l) {
      return l.satisfied_by(model[l.index()]);
    });
    if (!sat)
      return false;
  }
  return true;
}

void write_solver_output(std::ostream &out, const SolveResult &r,
                         bool include_time) {
  switch (r.verdict) {
  case Verdict::Sat:
    out << "s SATISFIABLE\n";
    break;
  case Verdict::Unsat:
    out << "s UNSATISFIABLE\n";
    break;
  case Verdict::BudgetExhausted:
    out << "s UNKNOWN\n";
    break;
  }
  if (r.verdict == Verdict::Sat) {
    std::string line = "v";
    for (std::size_t k = 0; k < r.model.size(); ++k) {
      const std::string lit =
          (r.model[k] ? "" : "-") + std::to_string(k + 1);
      if (line.size() + 1 + lit.size() > 78) {
        out << line << '\n';
        line = "v";
      }
      line += ' ' + lit;
    }
    out << line << " 0\n";
  }
  out << "conflicts " << r.stats.conflicts << '\n';
  out << "decisions " << r.stats.decisions << '\n';
  out << "propagations " << r.stats.propagations << '\n';
  out << "restarts " << r.stats.restarts << '\n';
  if (include_time)
    out << "wall_ms " << r.stats.wall_ms << '\n';
}

} // namespace satml
