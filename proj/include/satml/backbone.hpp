#pragma once

#include "satml/cnf.hpp"
#include "satml/hints.hpp"
#include "satml/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace satml {

enum class BackboneStatus { True, False, Free };

struct BackboneReport {
  std::string instance_id;
  std::vector<BackboneStatus> status; // status[v-1]
  std::size_t num_true = 0;
  std::size_t num_false = 0;
  std::size_t num_free = 0;
  /// Solver invocations, including the initial satisfiability check.
  std::size_t solver_calls = 0;

  std::size_t size() const { return num_true + num_false; }
  bool operator==(const BackboneReport &o) const {
    return instance_id == o.instance_id && status == o.status;
  }
};

/// Thrown when the formula has no satisfying assignment, or when a solver
/// call hits its conflict budget.
class BackboneError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One solver call per undecided variable, asserting the opposite of the
/// reference model. With model_filtering, every variable that differs
/// between the reference model and a newly found model is marked free
/// without its own call.
BackboneReport compute_backbone(const Formula &f, const SolverConfig &cfg = {},
                                bool model_filtering = true,
                                std::string instance_id = {});

struct HintScore {
  std::size_t matched = 0;
  std::size_t backbone_size = 0;
  /// Undefined for an empty backbone.
  std::optional<double> accuracy;
};

HintScore hint_accuracy(const PolarityHints &hints, const BackboneReport &report);

/// One line per variable `<var> <T|F|->`, then `# backbone_true N
/// backbone_false N free N`.
void write_backbone(std::ostream &out, const BackboneReport &r);
BackboneReport read_backbone(std::istream &in);

} // namespace satml
