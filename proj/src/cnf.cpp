#include "satml/cnf.hpp"
#include "satml/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace satml {

struct ClauseAccess {
  static Clause make(std::vector<Literal> lits) {
    return Clause(Clause::Trusted{}, std::move(lits));
  }
  static Formula make(Var num_vars, std::vector<Clause> clauses) {
    Formula f;
    f.num_vars_ = num_vars;
    f.clauses_ = std::move(clauses);
    return f;
  }
};

//===----------------------------------------------------------------------===//
// Literal / Clause / Formula
//===----------------------------------------------------------------------===//

Literal Literal::from_dimacs(int lit) {
  if (lit == 0 || lit == std::numeric_limits<int>::min())
    throw std::invalid_argument("invalid DIMACS literal " + std::to_string(lit));
  return Literal(static_cast<Var>(lit < 0 ? -lit : lit), lit < 0);
}

Clause::Clause(std::vector<Literal> literals) {
  literals_.reserve(literals.size());
  for (Literal l : literals) {
    if (std::find(literals_.begin(), literals_.end(), ~l) != literals_.end())
      throw std::invalid_argument("tautological clause");
    if (std::find(literals_.begin(), literals_.end(), l) == literals_.end())
      literals_.push_back(l);
  }
  if (literals_.empty())
    throw std::invalid_argument("empty clause");
}

Clause::Clause(std::initializer_list<int> dimacs)
    : Clause([&] {
        std::vector<Literal> lits;
        for (int d : dimacs)
          lits.push_back(Literal::from_dimacs(d));
        return lits;
      }()) {}

Formula::Formula(Var num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  for (const Clause &c : clauses_)
    for (Literal l : c)
      if (l.var() > num_vars_)
        throw std::invalid_argument("literal " + std::to_string(l.to_dimacs()) +
                                    " exceeds variable count " +
                                    std::to_string(num_vars_));
}

std::vector<Var> Formula::occurring_vars() const {
  std::vector<char> seen(num_vars_ + 1, 0);
  for (const Clause &c : clauses_)
    for (Literal l : c)
      seen[l.var()] = 1;
  std::vector<Var> out;
  for (Var v = 1; v <= num_vars_; ++v)
    if (seen[v])
      out.push_back(v);
  return out;
}

Formula Formula::with_clause(Clause c) const {
  std::vector<Clause> clauses = clauses_;
  clauses.push_back(std::move(c));
  return Formula(num_vars_, std::move(clauses));
}

void PartialAssignment::set(Var v, bool value) {
  if (v == 0)
    throw std::invalid_argument("variable index 0");
  if (v >= values_.size())
    values_.resize(v + 1, kUnset);
  values_[v] = value ? kTrue : kFalse;
}

std::size_t PartialAssignment::count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(),
                    [](std::int8_t x) { return x != kUnset; }));
}

//===----------------------------------------------------------------------===//
// DIMACS
//===----------------------------------------------------------------------===//

namespace {

long long parse_integer(std::string_view tok, std::size_t line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" +
                     std::string(tok) + "'");
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

} // namespace

Formula parse_dimacs(std::istream &in) {
  std::optional<long long> header_vars, header_clauses;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == 'c')
      continue;
    if (toks[0] == "p") {
      if (header_vars)
        throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf")
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed header, expected 'p cnf <vars> <clauses>'");
      header_vars = parse_integer(toks[2], line_no);
      header_clauses = parse_integer(toks[3], line_no);
      if (*header_vars < 0 || *header_clauses < 0 ||
          *header_vars > std::numeric_limits<int>::max())
        throw ParseError("line " + std::to_string(line_no) + ": negative or oversized header counts");
      continue;
    }
    if (toks[0] == "%") // trailer used by some benchmark archives
      break;
    if (!header_vars)
      throw ParseError("line " + std::to_string(line_no) + ": clause before header");
    for (std::string_view tok : toks) {
      long long lit = parse_integer(tok, line_no);
      if (lit == 0) {
        if (pending.empty())
          throw ParseError("line " + std::to_string(line_no) + ": empty clause");
        try {
          clauses.emplace_back(std::move(pending));
        } catch (const std::invalid_argument &e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        pending.clear();
        continue;
      }
      long long var = lit < 0 ? -lit : lit;
      if (var > *header_vars)
        throw ParseError("line " + std::to_string(line_no) + ": literal " +
                         std::to_string(lit) + " exceeds declared variable count " +
                         std::to_string(*header_vars));
      pending.push_back(Literal(static_cast<Var>(var), lit < 0));
    }
  }
  if (!header_vars)
    throw ParseError("missing 'p cnf' header");
  if (!pending.empty())
    throw ParseError("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != *header_clauses)
    throw ParseError("header declares " + std::to_string(*header_clauses) +
                     " clauses, found " + std::to_string(clauses.size()));
  return ClauseAccess::make(static_cast<Var>(*header_vars), std::move(clauses));
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Formula read_dimacs_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return parse_dimacs(in);
}

void write_dimacs(std::ostream &out, const Formula &f) {
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause &c : f.clauses()) {
    for (Literal l : c)
      out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Formula &f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

void write_dimacs_file(const std::string &path, const Formula &f) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_dimacs(out, f);
}

//===----------------------------------------------------------------------===//
// Generation
//===----------------------------------------------------------------------===//

std::size_t clauses_for_ratio(Var num_vars, double ratio) {
  if (!(ratio > 0) || !std::isfinite(ratio))
    throw std::invalid_argument("clause/variable ratio must be positive");
  return static_cast<std::size_t>(std::llround(ratio * num_vars));
}

Formula generate_random_3cnf(Var num_vars, std::size_t num_clauses,
                             std::uint64_t seed) {
  if (num_vars < 3)
    throw std::invalid_argument("random 3-CNF needs at least 3 variables");
  Rng rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(num_clauses);
  for (std::size_t i = 0; i < num_clauses; ++i) {
    std::vector<Literal> lits;
    lits.reserve(3);
    while (lits.size() < 3) {
      Var v = static_cast<Var>(rng.below(num_vars)) + 1;
      if (std::any_of(lits.begin(), lits.end(),
                      [v](Literal l) { return l.var() == v; }))
        continue;
      lits.emplace_back(v, rng.coin());
    }
    clauses.push_back(ClauseAccess::make(std::move(lits)));
  }
  return ClauseAccess::make(num_vars, std::move(clauses));
}

//===----------------------------------------------------------------------===//
// Simplification
//===----------------------------------------------------------------------===//

SimplifyOutcome apply_assignment(const Formula &f, const PartialAssignment &a) {
  if (a.max_var() > f.num_vars()) {
    for (Var v = f.num_vars() + 1; v <= a.max_var(); ++v)
      if (a.get(v))
        throw std::invalid_argument("assignment references variable " +
                                    std::to_string(v) + " beyond formula");
  }

  std::vector<std::vector<Literal>> kept;
  kept.reserve(f.num_clauses());
  std::vector<Var> renumber(f.num_vars() + 1, 0);
  for (const Clause &c : f.clauses()) {
    std::vector<Literal> lits;
    bool satisfied = false;
    for (Literal l : c) {
      auto value = a.get(l.var());
      if (!value) {
        lits.push_back(l);
      } else if (l.satisfied_by(*value)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied)
      continue;
    if (lits.empty())
      return Conflict{};
    for (Literal l : lits)
      renumber[l.var()] = 1;
    kept.push_back(std::move(lits));
  }
  if (kept.empty())
    return Satisfied{};

  Residual r;
  for (Var v = 1; v <= f.num_vars(); ++v) {
    if (renumber[v]) {
      r.original_var.push_back(v);
      renumber[v] = static_cast<Var>(r.original_var.size());
    }
  }
  std::vector<Clause> clauses;
  clauses.reserve(kept.size());
  for (auto &lits : kept) {
    for (Literal &l : lits)
      l = Literal(renumber[l.var()], l.negated());
    clauses.push_back(ClauseAccess::make(std::move(lits)));
  }
  r.formula = ClauseAccess::make(static_cast<Var>(r.original_var.size()),
                                 std::move(clauses));
  return r;
}

} // namespace satml
