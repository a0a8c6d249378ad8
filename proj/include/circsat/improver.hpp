#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "circsat/circuit.hpp"
#include "circsat/solver.hpp"
#include "circsat/spec.hpp"

namespace circsat {

/// A convex, weakly connected set of gates of a host circuit.
struct Cut {
  /// 1-based gate indices, ascending.
  std::vector<int> gates;
  /// Distinct refs outside the set read by its gates, ascending.
  std::vector<Ref> boundary_inputs;
  /// Gates of the set read outside it or used as circuit outputs, ascending.
  std::vector<int> boundary_outputs;

  bool operator==(const Cut &) const = default;
};

enum class DcMode { Global, Off };

struct ImproveOptions {
  int max_gates = 5;
  int max_inputs = 8;
  /// Global is switched off automatically when the host has more than 16 inputs.
  DcMode dc_mode = DcMode::Global;
  /// Seconds per SAT call.
  double sat_timeout = 60;
  /// Maximum number of passes; 0 = until a pass finds nothing.
  int pass_budget = 0;
  /// Lowest-order improvement wins regardless of thread timing.
  bool deterministic = true;
  /// Threads probing cuts of one pass.
  int jobs = 1;
  /// Solver selection; its time_limit is replaced by sat_timeout.
  SolverConfig solver;
};

struct AcceptedReplacement {
  std::vector<int> cut_gates;
  int old_size = 0;
  int new_size = 0;
  double solver_seconds = 0;
};

struct ImproveReport {
  std::vector<AcceptedReplacement> accepted;
  int initial_size = 0;
  int final_size = 0;
  int passes = 0;
  /// SAT probes run and how many of them ended Unknown.
  int probes = 0;
  int unknown_probes = 0;
};

/// Every convex, weakly connected gate set within the bounds, each exactly
/// once, ordered lexicographically by sorted gate tuple.
std::vector<Cut> enumerate_cuts(const Circuit &c, const ImproveOptions &opts);

/// Fills boundary_inputs and boundary_outputs for a gate set.
Cut make_cut(const Circuit &c, std::vector<int> gates);

/// True iff no path between two gates of the set leaves it.
bool is_convex(const Circuit &c, const std::vector<int> &gates);

/// The function of the cut over its boundary inputs. Global mode keeps only
/// the boundary patterns some host input produces; throws std::invalid_argument
/// when the host has more than kExhaustiveLimit inputs.
PartialSpec cut_local_spec(const Circuit &c, const Cut &cut, DcMode mode);

/// The cut as a stand-alone circuit on its boundary inputs.
Circuit extract_cut(const Circuit &c, const Cut &cut);

struct TryResult {
  enum class Status { Replacement, NoImprovement, Unknown };
  Status status = Status::NoImprovement;
  /// Inputs are the boundary inputs, outputs the boundary outputs, in order.
  std::optional<Circuit> fragment;
  double solver_seconds = 0;
};

/// Asks for a circuit of |cut| - 1 gates realizing the local spec.
TryResult try_improve_cut(const Circuit &c, const Cut &cut, const ImproveOptions &opts);
TryResult try_improve_cut(const Circuit &c, const Cut &cut, const PartialSpec &local,
                          const ImproveOptions &opts);

/// Replaces the cut by `fragment`, normalizes and folds degenerate gates
/// when that shrinks the result. Throws std::invalid_argument
/// on arity mismatch and std::logic_error if the result is cyclic or, for
/// n <= 20, not equivalent to c.
Circuit splice(const Circuit &c, const Cut &cut, const Circuit &fragment);

/// Called after every accepted replacement with the new circuit.
using ImproveCallback = std::function<void(const AcceptedReplacement &, const Circuit &)>;

/// First-improvement local search over cuts, restarting after each accepted
/// replacement.
std::pair<Circuit, ImproveReport> improve_circuit(const Circuit &c, const ImproveOptions &opts,
                                                  const ImproveCallback &on_accept = {});

} // namespace circsat
