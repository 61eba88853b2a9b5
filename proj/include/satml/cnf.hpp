#pragma once

// CNF data model: literals, clauses, formulae, DIMACS I/O, the random 3-CNF
// generator and simplification under partial assignments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace satml {

using Var = std::uint32_t; // 1-based, DIMACS numbering

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A variable or its negation. Encoded as 2*(var-1) + negated so that a
/// literal can index per-literal tables directly.
class Literal {
public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool negated)
      : code_(2 * (var - 1) + (negated ? 1U : 0U)) {}

  static Literal from_dimacs(int lit);
  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return (code_ >> 1) + 1; }
  constexpr bool negated() const { return (code_ & 1U) != 0; }
  constexpr bool positive() const { return !negated(); }
  constexpr std::uint32_t code() const { return code_; }
  /// 0-based variable index, for array lookups.
  constexpr std::uint32_t index() const { return code_ >> 1; }
  int to_dimacs() const {
    return negated() ? -static_cast<int>(var()) : static_cast<int>(var());
  }

  constexpr Literal operator~() const { return from_code(code_ ^ 1U); }
  constexpr auto operator<=>(const Literal &) const = default;

  /// True if this literal is satisfied when its variable takes `value`.
  constexpr bool satisfied_by(bool value) const { return value != negated(); }

private:
  std::uint32_t code_ = 0;
};

/// Disjunction of literals. Construction merges duplicate literals and rejects
/// tautologies; the empty clause cannot be constructed (simplification reports
/// it as a conflict instead).
class Clause {
public:
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<int> dimacs);

  std::span<const Literal> literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  auto begin() const { return literals_.begin(); }
  auto end() const { return literals_.end(); }
  const Literal &operator[](std::size_t i) const { return literals_[i]; }
  bool operator==(const Clause &) const = default;

private:
  struct Trusted {};
  Clause(Trusted, std::vector<Literal> literals)
      : literals_(std::move(literals)) {}
  friend class Formula;
  friend struct ClauseAccess;

  std::vector<Literal> literals_;
};

class Formula {
public:
  Formula() = default;
  Formula(Var num_vars, std::vector<Clause> clauses);

  Var num_vars() const { return num_vars_; }
  std::span<const Clause> clauses() const { return clauses_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  bool operator==(const Formula &) const = default;

  /// Variables that occur in at least one clause, ascending.
  std::vector<Var> occurring_vars() const;

  /// Copy with one extra clause appended.
  Formula with_clause(Clause c) const;

private:
  friend struct ClauseAccess;
  Var num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// Dense partial map Var -> bool.
class PartialAssignment {
public:
  PartialAssignment() = default;
  explicit PartialAssignment(Var num_vars) : values_(num_vars + 1, kUnset) {}

  void set(Var v, bool value);
  void set(Literal lit) { set(lit.var(), lit.positive()); }
  std::optional<bool> get(Var v) const {
    if (v >= values_.size() || values_[v] == kUnset)
      return std::nullopt;
    return values_[v] == kTrue;
  }
  /// Largest variable index that may be assigned.
  Var max_var() const {
    return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1);
  }
  std::size_t count() const;

private:
  static constexpr std::int8_t kUnset = -1;
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;
  std::vector<std::int8_t> values_;
};

struct Satisfied {
  bool operator==(const Satisfied &) const = default;
};
struct Conflict {
  bool operator==(const Conflict &) const = default;
};
/// Reduced formula over the variables still occurring, renumbered densely in
/// ascending order of the original index. original_var[i] is the original
/// index of residual variable i+1.
struct Residual {
  Formula formula;
  std::vector<Var> original_var;
  bool operator==(const Residual &) const = default;
};
using SimplifyOutcome = std::variant<Satisfied, Conflict, Residual>;

//===----------------------------------------------------------------------===//
// Operations
//===----------------------------------------------------------------------===//

Formula parse_dimacs(std::istream &in);
Formula parse_dimacs(std::string_view text);
Formula read_dimacs_file(const std::string &path);

void write_dimacs(std::ostream &out, const Formula &f);
std::string write_dimacs(const Formula &f);
void write_dimacs_file(const std::string &path, const Formula &f);

/// Default clause/variable ratio for generated instances.
inline constexpr double kDefaultClauseVarRatio = 4.26;

/// round(ratio * num_vars).
std::size_t clauses_for_ratio(Var num_vars, double ratio);

/// Uniform random 3-CNF: each clause draws 3 distinct variables without
/// replacement and an independent fair sign for each. Pure function of its
/// arguments.
Formula generate_random_3cnf(Var num_vars, std::size_t num_clauses,
                             std::uint64_t seed);

SimplifyOutcome apply_assignment(const Formula &f, const PartialAssignment &a);

} // namespace satml
