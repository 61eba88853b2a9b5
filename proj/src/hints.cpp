#include "satml/hints.hpp"
#include "satml/text.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace satml {

PolarityHints PolarityHints::from_assignment(const std::vector<bool> &model) {
  PolarityHints h;
  h.entries.reserve(model.size());
  for (bool b : model)
    h.entries.push_back({b, b ? 0.0 : 1.0, b ? 1.0 : 0.0});
  return h;
}

void write_hints(std::ostream &out, const PolarityHints &h) {
  for (std::size_t k = 0; k < h.entries.size(); ++k) {
    const VarHint &e = h.entries[k];
    out << k + 1 << ' ' << (e.value ? 1 : 0) << ' ' << format_double(e.mean_false)
        << ' ' << format_double(e.mean_true) << '\n';
  }
}

PolarityHints read_hints(std::istream &in) {
  PolarityHints h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;)
      toks.push_back(t);
    if (toks.empty() || toks[0][0] == '#')
      continue;
    auto fail = [&](const std::string &msg) {
      return std::runtime_error("hints line " + std::to_string(line_no) + ": " + msg);
    };
    if (toks.size() != 4)
      throw fail("expected '<var> <0|1> <mean_false> <mean_true>'");
    try {
      const std::uint64_t var = parse_u64(toks[0]);
      if (var != h.entries.size() + 1)
        throw fail("variables must be listed in order starting at 1");
      if (toks[1] != "0" && toks[1] != "1")
        throw fail("polarity must be 0 or 1");
      VarHint e;
      e.value = toks[1] == "1";
      e.mean_false = parse_double(toks[2]);
      e.mean_true = parse_double(toks[3]);
      h.entries.push_back(e);
    } catch (const std::invalid_argument &e) {
      throw fail(e.what());
    }
  }
  return h;
}

void write_hints_file(const std::string &path, const PolarityHints &h) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_hints(out, h);
}

PolarityHints read_hints_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_hints(in);
}

} // namespace satml
