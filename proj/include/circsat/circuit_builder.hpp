#pragma once

#include <span>
#include <string>
#include <vector>

#include "circsat/circuit.hpp"

namespace circsat {

/// Assembles circuits out of gates and sub-circuits. Operands may be
/// constants or repeat a signal; build() cleans those up.
class CircuitBuilder {
public:
  explicit CircuitBuilder(int input_count) : raw_(input_count) {}

  int input_count() const { return raw_.input_count(); }
  int raw_size() const { return raw_.size(); }

  static Ref input(int i) { return Ref::input(static_cast<std::uint32_t>(i)); }
  static Ref constant(bool b) { return Ref::constant(b); }

  Ref add(GateOp op, Ref left, Ref right) { return raw_.add_gate(op, left, right); }

  /// Copies `block` with its inputs bound to `inputs`; returns the refs of its
  /// outputs in order.
  std::vector<Ref> instantiate(const Circuit &block, std::span<const Ref> inputs);

  void add_output(std::string label, Ref ref) { raw_.add_output(std::move(label), ref); }

  /// The netlist as assembled, possibly with constant operands.
  const Circuit &raw() const { return raw_; }

  /// Propagates constants, drops degenerate, duplicate and dead gates.
  Circuit build() const { return simplify(raw_); }
  /// The netlist as assembled with dead gates removed; throws if invalid.
  Circuit build_exact() const;

private:
  Circuit raw_;
};

} // namespace circsat
