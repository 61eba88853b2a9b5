#pragma once

#include "satml/cnf.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace satml {

struct VarHint {
  bool value = false;
  double mean_false = 0.5;
  double mean_true = 0.5;
  bool operator==(const VarHint &) const = default;
};

/// Preferred initial polarity per variable; entries[v-1] belongs to v.
struct PolarityHints {
  std::vector<VarHint> entries;

  Var num_vars() const { return static_cast<Var>(entries.size()); }
  bool value(Var v) const { return entries.at(v - 1).value; }
  bool operator==(const PolarityHints &) const = default;

  /// Hints that replay a total assignment (model[v-1] for v).
  static PolarityHints from_assignment(const std::vector<bool> &model);
};

/// One line per variable: `<var> <0|1> <mean_false> <mean_true>`.
void write_hints(std::ostream &out, const PolarityHints &h);
PolarityHints read_hints(std::istream &in);
void write_hints_file(const std::string &path, const PolarityHints &h);
PolarityHints read_hints_file(const std::string &path);

} // namespace satml
