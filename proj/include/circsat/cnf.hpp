#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace circsat {

/// Clause set in DIMACS semantics: variables 1..variable_count, literal v or -v.
struct CnfFormula {
  int variable_count = 0;
  std::vector<std::vector<int>> clauses;

  int new_variable() { return ++variable_count; }
  void add_clause(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
  void add_clause(std::initializer_list<int> clause) { clauses.emplace_back(clause); }

  bool operator==(const CnfFormula &) const = default;
};

/// "p cnf V C" header then one 0-terminated clause per line.
std::string emit_dimacs(const CnfFormula &f);
void write_dimacs(std::ostream &out, const CnfFormula &f);

/// Reads DIMACS CNF; 'c' lines are comments. Throws std::invalid_argument on
/// malformed input or literals beyond the declared variable count.
CnfFormula parse_dimacs(std::string_view text);

/// model[v - 1] is the value of variable v.
bool satisfies(const CnfFormula &f, const std::vector<bool> &model);

} // namespace circsat
