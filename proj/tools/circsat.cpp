// circsat: exact synthesis, local improvement and constructions for Boolean
// circuits over the full binary basis.
//
// Exit codes: 0 success (find: Found; verify: equivalent; improve: improved),
// 1 negative answer (verify: counterexample; improve: unchanged),
// 2 usage, parse or parameter error, 3 internal error,
// 20 find: Unsat, 30 find: Unknown (timeout, solver error, interrupted).

#include <atomic>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "circsat/blocks.hpp"
#include "circsat/circuit_io.hpp"
#include "circsat/functions.hpp"
#include "circsat/improver.hpp"
#include "circsat/synthesis.hpp"

namespace {

using namespace circsat;

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 30;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Circuit load(const std::string &path) {
  try {
    return read_circuit_file(path);
  } catch (const std::exception &e) {
    throw UsageError(path + ": " + e.what());
  }
}

FunctionSpec parse_func(const std::string &text) {
  try {
    return parse_function(text);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
}

void save(const std::string &path, const Circuit &c) {
  if (path.empty() || path == "-")
    std::cout << serialize_circuit(c);
  else
    write_circuit_file(path, c);
}

SolverConfig solver_config(const std::string &command, double timeout) {
  SolverConfig config = SolverConfig::from_environment();
  if (!command.empty())
    config.external_command = split_command(command);
  if (!(timeout > 0))
    throw UsageError("--sat-timeout must be positive");
  config.time_limit = timeout;
  config.stop = &g_stop;
  return config;
}

std::string seconds(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << s;
  return out.str();
}

// ---------------------------------------------------------------------------

struct FindArgs {
  std::string func;
  int size = -1;
  bool min = false;
  int min_floor = 0;
  bool xor_chain = false;
  double timeout = 600;
  std::string solver;
  std::string output;
};

int exit_for(FindStatus s) {
  switch (s) {
  case FindStatus::Found:
    return kExitOk;
  case FindStatus::Unsat:
    return kExitUnsat;
  case FindStatus::Unknown:
    return kExitUnknown;
  }
  return kExitInternal;
}

void print_probe(const FindResult &p) {
  std::cout << "probe: size " << p.size << ' ' << to_string(p.status) << ' '
            << seconds(p.solver_seconds) << " s";
  if (p.status == FindStatus::Unknown)
    std::cout << " (" << to_string(p.reason) << (p.detail.empty() ? "" : ": " + p.detail) << ')';
  std::cout << '\n';
}

int cmd_find(const FindArgs &a) {
  const PartialSpec spec(parse_func(a.func));
  if (a.size < 0)
    throw UsageError("--size must be non-negative");
  const SolverConfig config = solver_config(a.solver, a.timeout);
  SynthesisConstraints constraints;
  if (a.xor_chain) {
    try {
      constraints = xor_chain_constraints(spec.input_count(), a.size);
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
  }
  if (!a.min) {
    const FindResult r = find_circuit(spec, a.size, constraints, config);
    print_probe(r);
    std::cout << "status: " << to_string(r.status) << '\n'
              << "solver_seconds: " << seconds(r.solver_seconds) << '\n';
    if (r.status == FindStatus::Unknown)
      std::cout << "reason: " << to_string(r.reason) << '\n';
    if (r.circuit) {
      std::cout << "size: " << r.circuit->size() << '\n';
      if (!a.output.empty())
        save(a.output, *r.circuit);
    }
    return exit_for(r.status);
  }
  if (a.min_floor < 0 || a.min_floor > a.size)
    throw UsageError("--min-floor must lie in [0, --size]");
  try {
    // The xor-chain constraints depend on the size, so sweep by hand when set.
    MinResult m;
    if (a.xor_chain) {
      std::optional<Circuit> best;
      for (int r = a.size; r >= std::max(a.min_floor, spec.input_count() - 1); --r) {
        FindResult p = find_circuit(spec, r, xor_chain_constraints(spec.input_count(), r), config);
        m.probes.push_back(p);
        if (p.status == FindStatus::Found) {
          best = *p.circuit;
          continue;
        }
        if (!best)
          throw SearchError("no circuit of size " + std::to_string(r), p);
        if (p.status == FindStatus::Unsat)
          m.status = MinStatus::ProvenMinimal;
        break;
      }
      m.circuit = *best;
    } else {
      m = find_min_circuit(spec, a.size, a.min_floor, {}, config);
    }
    for (const FindResult &p : m.probes)
      print_probe(p);
    double total = 0;
    for (const FindResult &p : m.probes)
      total += p.solver_seconds;
    std::cout << "status: FOUND\n"
              << "size: " << m.circuit.size() << '\n'
              << "minimality: " << to_string(m.status) << '\n'
              << "solver_seconds: " << seconds(total) << '\n';
    if (!a.output.empty())
      save(a.output, m.circuit);
    return kExitOk;
  } catch (const SearchError &e) {
    print_probe(e.probe());
    std::cout << "status: " << to_string(e.probe().status) << '\n';
    return exit_for(e.probe().status);
  }
}

// ---------------------------------------------------------------------------

struct ImproveArgs {
  std::string input;
  std::string output;
  std::string report;
  int max_gates = 5;
  int max_inputs = 8;
  std::string dc = "global";
  int passes = 0;
  double timeout = 60;
  int jobs = 1;
  std::string solver;
};

int cmd_improve(const ImproveArgs &a) {
  const Circuit c = load(a.input);
  if (!validate(c).empty())
    throw UsageError(a.input + ": " + validate(c).front().message);
  ImproveOptions opts;
  opts.max_gates = a.max_gates;
  opts.max_inputs = a.max_inputs;
  opts.dc_mode = a.dc == "off" ? DcMode::Off : DcMode::Global;
  opts.pass_budget = a.passes;
  opts.sat_timeout = a.timeout;
  opts.jobs = a.jobs;
  opts.solver = solver_config(a.solver, a.timeout);
  if (opts.max_gates < 2)
    throw UsageError("--max-gates must be at least 2");

  std::ofstream report;
  if (!a.report.empty()) {
    report.open(a.report);
    if (!report)
      throw UsageError("cannot write " + a.report);
  }
  auto on_accept = [&](const AcceptedReplacement &r, const Circuit &) {
    std::cout << "replacement: gates";
    for (int g : r.cut_gates)
      std::cout << " g" << g;
    std::cout << ", " << r.old_size << " -> " << r.new_size << ", "
              << seconds(r.solver_seconds) << " s\n";
    if (report) {
      nlohmann::json j = {{"event", "replacement"},
                          {"cut", r.cut_gates},
                          {"old_size", r.old_size},
                          {"new_size", r.new_size},
                          {"solver_seconds", r.solver_seconds}};
      report << j.dump() << '\n' << std::flush;
    }
  };
  const auto [improved, rep] = improve_circuit(c, opts, on_accept);
  std::cout << "initial_size: " << rep.initial_size << '\n'
            << "final_size: " << rep.final_size << '\n'
            << "passes: " << rep.passes << '\n'
            << "probes: " << rep.probes << '\n'
            << "unknown_probes: " << rep.unknown_probes << '\n';
  if (report) {
    nlohmann::json j = {{"event", "summary"},
                        {"initial_size", rep.initial_size},
                        {"final_size", rep.final_size},
                        {"passes", rep.passes},
                        {"probes", rep.probes},
                        {"unknown_probes", rep.unknown_probes},
                        {"interrupted", g_stop.load()}};
    report << j.dump() << '\n';
  }
  if (!a.output.empty())
    save(a.output, improved);
  return rep.accepted.empty() ? kExitNo : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string &input, const std::string &func) {
  const Circuit c = load(input);
  const FunctionSpec spec = parse_func(func);
  if (c.input_count() != spec.input_count() || c.output_count() != spec.output_count())
    throw UsageError("circuit has " + std::to_string(c.input_count()) + " inputs and " +
                     std::to_string(c.output_count()) + " outputs, the function " +
                     std::to_string(spec.input_count()) + " and " +
                     std::to_string(spec.output_count()));
  if (!validate(c).empty())
    throw UsageError(input + ": " + validate(c).front().message);
  const EquivalenceResult r = equivalent(c, spec);
  if (r.ok()) {
    std::cout << "result: equivalent\n";
    return kExitOk;
  }
  const Counterexample &cex = *r.counterexample;
  std::cout << "result: counterexample\n"
            << "assignment:";
  for (std::size_t i = 0; i < cex.assignment.size(); ++i)
    std::cout << " x" << i + 1 << '=' << cex.assignment[i];
  const std::uint64_t x = cex.assignment.index();
  std::cout << "\noutput: " << c.outputs()[cex.output].label << '\n'
            << "expected: " << spec.get(cex.output, x) << '\n'
            << "actual: " << evaluate(c, cex.assignment)[cex.output] << '\n';
  return kExitNo;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string family;
  int n = 0;
  int r = 0;
  int k = 0;
  std::string output;
};

int cmd_build(const BuildArgs &a) {
  Circuit c;
  std::string formula;
  const int n = a.n;
  try {
    if (a.family == "sum-adders") {
      c = build_sum_adders(n);
      formula = "full and half adders per weight";
    } else if (a.family == "sum-mdfa") {
      c = build_sum_mdfa(n);
      formula = "4.5n = " + std::to_string(4.5 * n);
    } else if (a.family == "mod3") {
      c = build_mod3(n, a.r);
      formula = "3n-5-[(n+r)=0 mod 3] = " + std::to_string(mod3_size_formula(n, a.r));
    } else if (a.family == "mod4") {
      c = build_mod4(n, a.r);
      formula = "2.5n+3 = " + std::to_string(2.5 * n + 3);
    } else if (a.family == "thr2-bubble") {
      c = build_thr2_bubble(n);
      formula = "3n-5 = " + std::to_string(3 * n - 5);
    } else if (a.family == "thr2-grid") {
      c = build_thr2_grid(n);
      formula = "2n+o(n), 2n = " + std::to_string(2 * n);
    } else if (a.family == "thr") {
      c = build_thr(n, a.k);
      int t = 0;
      while ((1 << t) < a.k)
        ++t;
      formula = "(4.5-2^(2-" + std::to_string(t) + "))n+o(n), leading term " +
                std::to_string((4.5 - 4.0 / (1 << t)) * n);
    } else {
      throw UsageError("unknown family '" + a.family + "'");
    }
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  std::cout << "size: " << c.size() << '\n' << "formula: " << formula << '\n';
  if (!a.output.empty())
    save(a.output, c);
  return kExitOk;
}

int cmd_export(const std::string &input, const std::string &output) {
  const Circuit c = load(input);
  if (output.empty() || output == "-") {
    std::cout << export_dot(c);
    return kExitOk;
  }
  std::ofstream out(output);
  if (!out)
    throw UsageError("cannot write " + output);
  out << export_dot(c);
  return kExitOk;
}

int cmd_stats(const std::string &input) {
  const Circuit c = load(input);
  if (!validate(c).empty())
    throw UsageError(input + ": " + validate(c).front().message);
  std::cout << "inputs: " << c.input_count() << '\n'
            << "gates: " << c.size() << '\n'
            << "outputs: " << c.output_count() << '\n'
            << "depth: " << depth(c) << '\n';
  std::map<std::string, int> ops;
  for (const Gate &g : c.gates())
    ++ops[g.op.name()];
  for (const auto &[name, count] : ops)
    std::cout << "op " << name << ": " << count << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  CLI::App app{"Exact synthesis and improvement of Boolean circuits"};
  app.require_subcommand(1);

  FindArgs fa;
  auto *find = app.add_subcommand("find", "Search for a circuit of a given size");
  find->add_option("--func", fa.func, "sum:N, mod:N:M:R, thr:N:K or tt:N:M:HEX[,HEX...]")
      ->required();
  find->add_option("--size", fa.size, "Number of gates (upper bound with --min)")->required();
  find->add_flag("--min", fa.min, "Decrease the size until a probe fails");
  find->add_option("--min-floor", fa.min_floor, "Smallest size probed by --min");
  find->add_flag("--xor-chain", fa.xor_chain, "Fix the first n-1 gates to an XOR chain");
  find->add_option("--sat-timeout", fa.timeout, "Seconds per SAT call");
  find->add_option("--solver", fa.solver, "External solver command; overrides CIRCUIT_SAT_SOLVER");
  find->add_option("-o,--output", fa.output, "Circuit file to write");

  ImproveArgs ia;
  auto *improve = app.add_subcommand("improve", "Replace subcircuits by smaller ones");
  improve->add_option("-i,--input", ia.input, "Circuit file")->required();
  improve->add_option("-o,--output", ia.output, "Improved circuit file");
  improve->add_option("--report", ia.report, "JSON-lines report file");
  improve->add_option("--max-gates", ia.max_gates, "Largest subcircuit considered");
  improve->add_option("--max-inputs", ia.max_inputs, "Most subcircuit inputs");
  improve->add_option("--dc", ia.dc, "Don't-care mode")
      ->check(CLI::IsMember({"global", "off"}));
  improve->add_option("--passes", ia.passes, "Pass budget, 0 = unlimited");
  improve->add_option("--sat-timeout", ia.timeout, "Seconds per SAT call");
  improve->add_option("--jobs", ia.jobs, "Parallel probes per pass");
  improve->add_option("--solver", ia.solver, "External solver command");

  std::string verify_in, verify_func;
  auto *verify = app.add_subcommand("verify", "Check a circuit against a function");
  verify->add_option("-i,--input", verify_in, "Circuit file")->required();
  verify->add_option("--func", verify_func, "Function")->required();

  BuildArgs ba;
  auto *build = app.add_subcommand("build", "Generate a circuit from a construction");
  build->add_option("--family", ba.family,
                    "sum-adders, sum-mdfa, mod3, mod4, thr2-bubble, thr2-grid or thr")
      ->required();
  build->add_option("-n", ba.n, "Number of inputs")->required();
  build->add_option("-r", ba.r, "Remainder");
  build->add_option("-k", ba.k, "Threshold");
  build->add_option("-o,--output", ba.output, "Circuit file to write");

  std::string export_in, export_out;
  bool dot = false;
  auto *exp = app.add_subcommand("export", "Write a Graphviz drawing");
  exp->add_flag("--dot", dot, "Graphviz DOT output")->required();
  exp->add_option("-i,--input", export_in, "Circuit file")->required();
  exp->add_option("-o,--output", export_out, "DOT file");

  std::string stats_in;
  auto *stats = app.add_subcommand("stats", "Print circuit statistics");
  stats->add_option("-i,--input", stats_in, "Circuit file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*find)
      return cmd_find(fa);
    if (*improve)
      return cmd_improve(ia);
    if (*verify)
      return cmd_verify(verify_in, verify_func);
    if (*build)
      return cmd_build(ba);
    if (*exp)
      return cmd_export(export_in, export_out);
    if (*stats)
      return cmd_stats(stats_in);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
