#include "circsat/synthesis.hpp"

namespace circsat {

std::string to_string(FindStatus s) {
  switch (s) {
  case FindStatus::Found:
    return "FOUND";
  case FindStatus::Unsat:
    return "UNSAT";
  case FindStatus::Unknown:
    return "UNKNOWN";
  }
  return "?";
}

std::string to_string(MinStatus s) {
  return s == MinStatus::ProvenMinimal ? "proven-minimal" : "best-found";
}

namespace {

// Turns on canonical_order unless a constraint names gate positions.
SynthesisConstraints with_canonical_order(SynthesisConstraints c) {
  if (!c.fixed_gates.empty() || !c.forbidden_wires.empty())
    return c;
  for (const auto &[h, ref] : c.fixed_outputs)
    if (ref.is_gate())
      return c;
  for (Ref ref : c.forbidden_output_refs)
    if (ref.is_gate())
      return c;
  c.canonical_order = true;
  return c;
}

} // namespace

FindResult find_circuit(const PartialSpec &spec, int size, const SynthesisConstraints &constraints,
                        const SolverConfig &config) {
  Encoding enc = encode_synthesis(spec, size, with_canonical_order(constraints));
  FindResult result;
  result.size = size;
  result.variables = enc.formula.variable_count;
  result.clauses = enc.formula.clauses.size();
  const SolverVerdict verdict = solve(enc.formula, config);
  result.solver_seconds = verdict.seconds;
  switch (verdict.status) {
  case Verdict::Sat:
    result.status = FindStatus::Found;
    result.circuit = decode_model(enc.varmap, verdict.model);
    break;
  case Verdict::Unsat:
    result.status = FindStatus::Unsat;
    break;
  case Verdict::Unknown:
    result.status = FindStatus::Unknown;
    result.reason = verdict.reason;
    result.detail = verdict.detail;
    break;
  }
  return result;
}

MinResult find_min_circuit(const PartialSpec &spec, int start_upper, int lower_floor,
                           const SynthesisConstraints &constraints, const SolverConfig &config) {
  if (lower_floor < 0 || start_upper < lower_floor)
    throw std::invalid_argument("need start_upper >= lower_floor >= 0");
  MinResult out;
  std::optional<Circuit> best;
  for (int r = start_upper; r >= lower_floor; --r) {
    FindResult probe = find_circuit(spec, r, constraints, config);
    out.probes.push_back(probe);
    if (probe.status == FindStatus::Found) {
      best = *probe.circuit;
      if (r == 0)
        out.status = MinStatus::ProvenMinimal;
      continue;
    }
    if (!best)
      throw SearchError("no circuit of size " + std::to_string(r) + ": " +
                            to_string(probe.status) +
                            (probe.detail.empty() ? "" : " (" + probe.detail + ")"),
                        probe);
    if (probe.status == FindStatus::Unsat)
      out.status = MinStatus::ProvenMinimal;
    break;
  }
  out.circuit = std::move(*best);
  return out;
}

SynthesisConstraints xor_chain_constraints(int n, int size) {
  if (n < 2)
    throw std::invalid_argument("the XOR chain needs at least two inputs");
  if (size < n - 1)
    throw std::invalid_argument("size " + std::to_string(size) + " is below the chain length " +
                                std::to_string(n - 1));
  SynthesisConstraints c;
  c.fixed_gates[1] = {GateOp::XOR(), Ref::input(1), Ref::input(2)};
  for (int i = 2; i <= n - 1; ++i)
    c.fixed_gates[i] = {GateOp::XOR(), Ref::gate(i - 1), Ref::input(i + 1)};
  for (int j = 2; j <= n; ++j) {
    const int own = j == 2 ? 1 : j - 1;
    for (int g = 1; g <= size; ++g)
      if (g != own)
        c.forbidden_wires.insert({Ref::input(j), g});
    c.forbidden_output_refs.insert(Ref::input(j));
  }
  return c;
}

FindResult find_with_structure(const PartialSpec &spec, int size, bool xor_chain,
                               const SolverConfig &config) {
  if (!xor_chain)
    return find_circuit(spec, size, {}, config);
  return find_circuit(spec, size, xor_chain_constraints(spec.input_count(), size), config);
}

} // namespace circsat
