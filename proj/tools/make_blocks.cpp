// Regenerates the synthesized block circuits in data/blocks.
//
//   make_blocks OUTDIR [--prove] [NAME...]
//
// With no names, every block that is not hand-entered is synthesized at its
// listed size. --prove also checks that one gate fewer is unsatisfiable.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "circsat/blocks.hpp"
#include "circsat/circuit_io.hpp"
#include "circsat/synthesis.hpp"

int main(int argc, char **argv) {
  using namespace circsat;
  if (argc < 2) {
    std::cerr << "usage: make_blocks OUTDIR [--prove] [NAME...]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  bool prove = false;
  std::vector<std::string> names;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--prove")
      prove = true;
    else
      names.push_back(arg);
  }
  const std::set<std::string> hand_entered = {"half_adder", "full_adder", "sum5_11", "mdfa"};
  if (names.empty())
    for (const auto &[name, size] : block_sizes())
      if (!hand_entered.count(name))
        names.push_back(name);

  SolverConfig config = SolverConfig::from_environment();
  config.time_limit = 24 * 3600;
  for (const std::string &name : names) {
    const auto it = block_sizes().find(name);
    if (it == block_sizes().end()) {
      std::cerr << "unknown block " << name << '\n';
      return 1;
    }
    const int size = it->second;
    const PartialSpec spec = block_spec(name);
    std::cerr << name << ": size " << size << " ... " << std::flush;
    FindResult found = find_circuit(spec, size, {}, config);
    if (found.status != FindStatus::Found) {
      std::cerr << to_string(found.status) << '\n';
      return 2;
    }
    std::cerr << "found in " << found.solver_seconds << " s";
    std::string note = "# " + name + ", synthesized at " + std::to_string(size) + " gates";
    if (prove && size > 0) {
      const FindResult below = find_circuit(spec, size - 1, {}, config);
      std::cerr << "; size " << size - 1 << ": " << to_string(below.status) << " in "
                << below.solver_seconds << " s";
      if (below.status == FindStatus::Unsat)
        note += " (minimal)";
    }
    std::cerr << '\n';
    std::ofstream out(dir / (name + ".circ"));
    out << note << '\n' << serialize_circuit(*found.circuit);
  }
  return 0;
}
