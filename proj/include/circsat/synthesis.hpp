#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circsat/circuit.hpp"
#include "circsat/encoder.hpp"
#include "circsat/solver.hpp"
#include "circsat/spec.hpp"

namespace circsat {

enum class FindStatus { Found, Unsat, Unknown };
std::string to_string(FindStatus s);

struct FindResult {
  FindStatus status = FindStatus::Unknown;
  /// Set when Found: exactly the requested number of gates, verified.
  std::optional<Circuit> circuit;
  int size = 0;
  UnknownReason reason = UnknownReason::None;
  std::string detail;
  double solver_seconds = 0;
  int variables = 0;
  std::size_t clauses = 0;
};

/// Adds canonical_order to the constraints whenever they allow it.
FindResult find_circuit(const PartialSpec &spec, int size,
                        const SynthesisConstraints &constraints, const SolverConfig &config);

enum class MinStatus { ProvenMinimal, BestFound };
std::string to_string(MinStatus s);

struct MinResult {
  Circuit circuit;
  MinStatus status = MinStatus::BestFound;
  /// Every probe in the order it ran.
  std::vector<FindResult> probes;
};

/// Raised when the sweep's first probe does not find a circuit.
class SearchError : public std::runtime_error {
public:
  SearchError(const std::string &message, FindResult probe)
      : std::runtime_error(message), probe_(std::move(probe)) {}
  const FindResult &probe() const { return probe_; }

private:
  FindResult probe_;
};

/// Probes start_upper, start_upper - 1, ... down to lower_floor, stopping at
/// the first Unsat or Unknown. Proven minimal iff the size below the last
/// Found one was refuted (or the circuit has no gates).
MinResult find_min_circuit(const PartialSpec &spec, int start_upper, int lower_floor,
                           const SynthesisConstraints &constraints, const SolverConfig &config);

/// Constraints fixing gates 1..n-1 to x1 ^ x2 ^ ... ^ xn built as a chain and
/// leaving x2..xn no other reader (gate or output).
SynthesisConstraints xor_chain_constraints(int n, int size);

/// find_circuit under xor_chain_constraints when xor_chain is set.
FindResult find_with_structure(const PartialSpec &spec, int size, bool xor_chain,
                               const SolverConfig &config);

} // namespace circsat
