// Stand-alone DIMACS solver speaking the SAT competition output format,
// backed by the embedded CDCL search. Exit code 10 = SAT, 20 = UNSAT, 0 = unknown.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "circsat/cnf.hpp"
#include "circsat/solver.hpp"

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: dimacs_solve FILE.cnf [TIME_LIMIT_SECONDS]\n";
    return 1;
  }
  std::ifstream in(argv[1], std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << '\n';
    return 1;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  circsat::CnfFormula f;
  try {
    f = circsat::parse_dimacs(buf.str());
  } catch (const std::exception &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  }
  circsat::EmbeddedLimits limits;
  if (argc >= 3)
    limits.time_limit = std::stod(argv[2]);
  const auto v = circsat::solve_embedded(f, limits);
  std::cout << "c solved in " << v.seconds << " s\n";
  switch (v.status) {
  case circsat::Verdict::Sat: {
    std::cout << "s SATISFIABLE\n";
    std::string line = "v";
    for (int var = 1; var <= f.variable_count; ++var) {
      line += ' ' + std::to_string(v.model[var - 1] ? var : -var);
      if (line.size() > 72) {
        std::cout << line << '\n';
        line = "v";
      }
    }
    std::cout << line << " 0\n";
    return 10;
  }
  case circsat::Verdict::Unsat:
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  case circsat::Verdict::Unknown:
    std::cout << "s UNKNOWN\n";
    return 0;
  }
  return 0;
}
