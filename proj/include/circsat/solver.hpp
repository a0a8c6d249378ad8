#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circsat/cnf.hpp"

namespace circsat {

enum class Verdict { Sat, Unsat, Unknown };
enum class UnknownReason { None, Timeout, SolverError, Interrupted };

std::string to_string(Verdict v);
std::string to_string(UnknownReason r);

struct SolverVerdict {
  Verdict status = Verdict::Unknown;
  /// model[v - 1] is variable v; filled for Sat only.
  std::vector<bool> model;
  UnknownReason reason = UnknownReason::None;
  std::string detail;
  double seconds = 0;

  bool sat() const { return status == Verdict::Sat; }
  bool unsat() const { return status == Verdict::Unsat; }
  bool unknown() const { return status == Verdict::Unknown; }
};

struct SolverConfig {
  /// External program and arguments. An argument equal to "{}" is replaced by
  /// the CNF path; otherwise the path is appended. Empty = embedded solver.
  std::vector<std::string> external_command;
  /// Per-call wall-clock limit in seconds; must be positive.
  double time_limit = 600;
  /// Above this many variables the embedded solver refuses unless forced.
  int embedded_threshold = 5000;
  bool force_embedded = false;
  /// Keep temporary CNF files and print their paths to stderr.
  bool keep_files = false;
  /// Set from another thread to abandon the call (embedded solver only).
  const std::atomic<bool> *stop = nullptr;

  /// Embedded solver unless CIRCUIT_SAT_SOLVER names a command.
  static SolverConfig from_environment();
};

/// Splits a command line on whitespace; single and double quotes group.
std::vector<std::string> split_command(const std::string &command);

SolverVerdict run_external(const CnfFormula &f, const SolverConfig &config);

struct EmbeddedLimits {
  double time_limit = 0;         // seconds, 0 = none
  std::uint64_t max_conflicts = 0; // 0 = none
  const std::atomic<bool> *stop = nullptr;
};

SolverVerdict solve_embedded(const CnfFormula &f, const EmbeddedLimits &limits = {});

/// External solver when configured, embedded otherwise. A Sat model that
/// fails to satisfy f is reported as Unknown(SolverError).
SolverVerdict solve(const CnfFormula &f, const SolverConfig &config);

/// Parses solver stdout following the SAT competition conventions
/// ("s ..." status line, "v ..." model lines).
SolverVerdict parse_solver_output(const std::string &output, int variable_count);

} // namespace circsat
