#include "circsat/cnf.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace circsat {

void write_dimacs(std::ostream &out, const CnfFormula &f) {
  out << "p cnf " << f.variable_count << ' ' << f.clauses.size() << '\n';
  std::string line;
  char buf[16];
  for (const auto &clause : f.clauses) {
    line.clear();
    for (int lit : clause) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, lit);
      line.append(buf, p);
      line.push_back(' ');
    }
    line += "0\n";
    out << line;
  }
}

std::string emit_dimacs(const CnfFormula &f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> clause;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    if (i == line.size() || line[i] == 'c' || line[i] == '%')
      continue;
    if (line[i] == 'p') {
      if (header)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": second header");
      std::istringstream in{std::string(line.substr(i))};
      std::string p, cnf;
      long vars = -1, count = -1;
      in >> p >> cnf >> vars >> count;
      if (cnf != "cnf" || vars < 0 || count < 0)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad header");
      f.variable_count = static_cast<int>(vars);
      declared = static_cast<std::size_t>(count);
      header = true;
      continue;
    }
    if (!header)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": clause before header");
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        ++i;
      if (i == line.size())
        break;
      int lit = 0;
      auto [p, ec] = std::from_chars(line.data() + i, line.data() + line.size(), lit);
      if (ec != std::errc())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad literal");
      i = static_cast<std::size_t>(p - line.data());
      if (lit == 0) {
        f.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        if (std::abs(lit) > f.variable_count)
          throw std::invalid_argument("line " + std::to_string(line_no) + ": literal " +
                                      std::to_string(lit) + " beyond declared variables");
        clause.push_back(lit);
      }
    }
  }
  if (!header)
    throw std::invalid_argument("missing 'p cnf' header");
  if (!clause.empty())
    f.clauses.push_back(std::move(clause));
  if (f.clauses.size() != declared)
    throw std::invalid_argument("header declares " + std::to_string(declared) + " clauses, found " +
                                std::to_string(f.clauses.size()));
  return f;
}

bool satisfies(const CnfFormula &f, const std::vector<bool> &model) {
  if (static_cast<int>(model.size()) < f.variable_count)
    return false;
  for (const auto &clause : f.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const bool v = model[std::abs(lit) - 1];
      if ((lit > 0) == v) {
        sat = true;
        break;
      }
    }
    if (!sat)
      return false;
  }
  return true;
}

} // namespace circsat
