#include "satml/backbone.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace satml {

BackboneReport compute_backbone(const Formula &f, const SolverConfig &cfg,
                                bool model_filtering, std::string instance_id) {
  SolverConfig c = cfg;
  c.polarity_mode = PolarityMode::AlwaysFalse;

  BackboneReport report;
  report.instance_id = std::move(instance_id);
  const SolveResult first = solve(f, c);
  report.solver_calls = 1;
  if (first.verdict == Verdict::Unsat)
    throw BackboneError("backbone of an unsatisfiable formula is undefined");
  if (first.verdict == Verdict::BudgetExhausted)
    throw BackboneError("conflict budget exhausted during the satisfiability check");
  const std::vector<bool> &sigma = first.model;

  std::vector<char> known_free(f.num_vars(), 0);
  report.status.assign(f.num_vars(), BackboneStatus::Free);
  for (Var v = 1; v <= f.num_vars(); ++v) {
    if (known_free[v - 1])
      continue;
    const bool value = sigma[v - 1];
    const Literal opposite(v, value); // negated iff sigma(v) is true
    const SolveResult r = solve(f.with_clause(Clause(std::vector<Literal>{opposite})), c);
    ++report.solver_calls;
    if (r.verdict == Verdict::BudgetExhausted)
      throw BackboneError("conflict budget exhausted testing variable " +
                          std::to_string(v));
    if (r.verdict == Verdict::Unsat) {
      report.status[v - 1] = value ? BackboneStatus::True : BackboneStatus::False;
      continue;
    }
    known_free[v - 1] = 1;
    if (model_filtering)
      for (Var u = v + 1; u <= f.num_vars(); ++u)
        if (r.model[u - 1] != sigma[u - 1])
          known_free[u - 1] = 1;
  }

  for (BackboneStatus s : report.status) {
    if (s == BackboneStatus::True)
      ++report.num_true;
    else if (s == BackboneStatus::False)
      ++report.num_false;
    else
      ++report.num_free;
  }
  return report;
}

HintScore hint_accuracy(const PolarityHints &hints, const BackboneReport &report) {
  if (hints.num_vars() != report.status.size())
    throw std::invalid_argument("hints and backbone report cover different variables");
  HintScore s;
  for (std::size_t k = 0; k < report.status.size(); ++k) {
    const BackboneStatus st = report.status[k];
    if (st == BackboneStatus::Free)
      continue;
    ++s.backbone_size;
    if (hints.entries[k].value == (st == BackboneStatus::True))
      ++s.matched;
  }
  if (s.backbone_size > 0)
    s.accuracy = static_cast<double>(s.matched) / static_cast<double>(s.backbone_size);
  return s;
}

void write_backbone(std::ostream &out, const BackboneReport &r) {
  for (std::size_t k = 0; k < r.status.size(); ++k) {
    const char c = r.status[k] == BackboneStatus::True    ? 'T'
                   : r.status[k] == BackboneStatus::False ? 'F'
                                                          : '-';
    out << k + 1 << ' ' << c << '\n';
  }
  out << "# backbone_true " << r.num_true << " backbone_false " << r.num_false
      << " free " << r.num_free << '\n';
}

BackboneReport read_backbone(std::istream &in) {
  BackboneReport r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream ls(line);
    std::size_t var = 0;
    char c = 0;
    if (!(ls >> var >> c) || var != r.status.size() + 1)
      throw std::runtime_error("malformed backbone line '" + line + "'");
    switch (c) {
    case 'T':
      r.status.push_back(BackboneStatus::True);
      ++r.num_true;
      break;
    case 'F':
      r.status.push_back(BackboneStatus::False);
      ++r.num_false;
      break;
    case '-':
      r.status.push_back(BackboneStatus::Free);
      ++r.num_free;
      break;
    default:
      throw std::runtime_error("unknown backbone status in '" + line + "'");
    }
  }
  return r;
}

} // namespace satml
