// Constant propagation and degenerate-gate elimination shared by restrict(),
// simplify() and CircuitBuilder.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

#include "circsat/circuit.hpp"
#include "circsat/circuit_builder.hpp"

namespace circsat {

namespace {

/// A signal of the rebuilt circuit, possibly complemented. Constants are kept
/// with neg = false.
struct Lit {
  Ref ref;
  bool neg = false;
};

Lit constant_lit(bool v) { return {Ref::constant(v), false}; }

/// Value u(y) of a single-variable function given u(0) and u(1).
Lit unary(bool u0, bool u1, Lit y) {
  if (u0 == u1)
    return constant_lit(u0);
  return {y.ref, y.neg != u0};
}

class Propagator {
public:
  Propagator(const Circuit &raw, const std::vector<std::optional<bool>> &fix) : raw_(raw) {
    const int n = raw.input_count();
    input_lit_.resize(n + 1);
    for (int i = 1; i <= n; ++i) {
      if (fix[i - 1])
        input_lit_[i] = constant_lit(*fix[i - 1]);
      else
        input_lit_[i] = {Ref::input(static_cast<std::uint32_t>(++new_inputs_)), false};
    }
  }

  Circuit run() {
    gate_lit_.resize(raw_.size() + 1);
    for (int i = 1; i <= raw_.size(); ++i) {
      const Gate &g = raw_.gate(i);
      gate_lit_[i] = combine(g.op, lit_of(g.left), lit_of(g.right));
    }
    std::vector<Lit> outs;
    for (const Output &o : raw_.outputs())
      outs.push_back(lit_of(o.ref));
    fix_negated_outputs(outs);

    Circuit out(new_inputs_);
    for (const Gate &g : gates_)
      out.add_gate(g.op, g.left, g.right);
    for (std::size_t h = 0; h < outs.size(); ++h)
      out.add_output(raw_.outputs()[h].label, outs[h].ref);
    return normalize(out);
  }

private:
  Lit lit_of(Ref r) const {
    switch (r.kind) {
    case RefKind::Constant:
      return constant_lit(r.index != 0);
    case RefKind::Input:
      if (r.index < 1 || r.index >= input_lit_.size())
        throw std::invalid_argument("reference to unknown input " + r.to_string());
      return input_lit_[r.index];
    case RefKind::Gate:
      if (r.index < 1 || r.index >= gate_lit_.size())
        throw std::invalid_argument("reference to unknown gate " + r.to_string());
      return gate_lit_[r.index];
    }
    return constant_lit(false);
  }

  Lit combine(GateOp op, Lit a, Lit b) {
    if (a.ref.is_constant()) {
      const bool av = a.ref.index != 0;
      if (b.ref.is_constant())
        return constant_lit(op.apply(av, b.ref.index != 0));
      return unary(op.apply(av, false), op.apply(av, true), b);
    }
    if (b.ref.is_constant()) {
      const bool bv = b.ref.index != 0;
      return unary(op.apply(false, bv), op.apply(true, bv), a);
    }
    if (a.ref == b.ref) {
      return unary(op.apply(a.neg, b.neg), op.apply(!a.neg, !b.neg), {a.ref, false});
    }
    const GateOp t = op.with_negated_operands(a.neg, b.neg);
    if (t.is_constant())
      return constant_lit(t.apply(false, false));
    if (!t.depends_on_right())
      return unary(t.apply(false, false), t.apply(true, false), {a.ref, false});
    if (!t.depends_on_left())
      return unary(t.apply(false, false), t.apply(false, true), {b.ref, false});

    // Structural hashing on the operand-order-independent form.
    auto key = a.ref < b.ref ? std::make_tuple(t.table(), a.ref, b.ref)
                             : std::make_tuple(t.transposed().table(), b.ref, a.ref);
    if (auto it = hash_.find(key); it != hash_.end())
      return {it->second, false};
    gates_.push_back({t, a.ref, b.ref});
    const Ref r = Ref::gate(static_cast<std::uint32_t>(gates_.size()));
    hash_.emplace(key, r);
    return {r, false};
  }

  /// Outputs cannot carry an inversion. A gate needed only in complemented
  /// form at the outputs is complemented in place and its readers absorb the
  /// inversion; a gate needed both ways gets a complemented twin, and an
  /// inverted input an explicit inverter gate.
  void fix_negated_outputs(std::vector<Lit> &outs) {
    std::set<std::uint32_t> positive;
    std::set<std::uint32_t> negative;
    for (const Lit &l : outs) {
      if (!l.ref.is_gate())
        continue;
      (l.neg ? negative : positive).insert(l.ref.index);
    }
    for (std::uint32_t g : negative) {
      if (positive.count(g))
        continue;
      gates_[g - 1].op = gates_[g - 1].op.complemented();
      for (std::size_t j = g; j < gates_.size(); ++j) {
        Gate &reader = gates_[j];
        const bool l = reader.left == Ref::gate(g);
        const bool r = reader.right == Ref::gate(g);
        if (l || r)
          reader.op = reader.op.with_negated_operands(l, r);
      }
      for (Lit &l : outs)
        if (l.ref == Ref::gate(g))
          l.neg = false;
    }
    std::map<Ref, Ref> inverters;
    for (Lit &l : outs) {
      if (!l.neg)
        continue;
      auto it = inverters.find(l.ref);
      if (it == inverters.end()) {
        if (l.ref.is_gate()) {
          const Gate g = gates_[l.ref.index - 1];
          gates_.push_back({g.op.complemented(), g.left, g.right});
        } else {
          const Ref other = any_signal_except(l.ref);
          // Table "1100": complement of the left operand.
          gates_.push_back({GateOp(0b0011), l.ref, other});
        }
        it = inverters.emplace(l.ref, Ref::gate(static_cast<std::uint32_t>(gates_.size()))).first;
      }
      l = {it->second, false};
    }
  }

  Ref any_signal_except(Ref r) const {
    for (int i = 1; i <= new_inputs_; ++i)
      if (Ref::input(i) != r)
        return Ref::input(i);
    for (std::size_t g = 1; g <= gates_.size(); ++g)
      if (Ref::gate(static_cast<std::uint32_t>(g)) != r && Ref::gate(static_cast<std::uint32_t>(g)) < r)
        return Ref::gate(static_cast<std::uint32_t>(g));
    throw std::runtime_error("cannot express a complemented output without a second signal");
  }

  const Circuit &raw_;
  int new_inputs_ = 0;
  std::vector<Lit> input_lit_;
  std::vector<Lit> gate_lit_;
  std::vector<Gate> gates_;
  std::map<std::tuple<std::uint8_t, Ref, Ref>, Ref> hash_;
};

} // namespace

Circuit restrict(const Circuit &c, const std::map<int, bool> &fixed) {
  std::vector<std::optional<bool>> fix(c.input_count());
  for (const auto &[index, value] : fixed) {
    if (index < 1 || index > c.input_count())
      throw std::invalid_argument("cannot fix unknown input x" + std::to_string(index));
    fix[index - 1] = value;
  }
  return Propagator(c, fix).run();
}

Circuit simplify(const Circuit &c) { return restrict(c, {}); }

std::vector<Ref> CircuitBuilder::instantiate(const Circuit &block, std::span<const Ref> inputs) {
  if (static_cast<int>(inputs.size()) != block.input_count())
    throw std::invalid_argument("block expects " + std::to_string(block.input_count()) +
                                " inputs, got " + std::to_string(inputs.size()));
  std::vector<Ref> gate_refs(block.size() + 1);
  auto map = [&](Ref r) {
    if (r.is_input())
      return inputs[r.index - 1];
    if (r.is_gate())
      return gate_refs[r.index];
    return r;
  };
  for (int i = 1; i <= block.size(); ++i) {
    const Gate &g = block.gate(i);
    gate_refs[i] = add(g.op, map(g.left), map(g.right));
  }
  std::vector<Ref> outs;
  for (const Output &o : block.outputs())
    outs.push_back(map(o.ref));
  return outs;
}

Circuit CircuitBuilder::build_exact() const {
  Circuit out = normalize(raw_);
  require_valid(out);
  return out;
}

} // namespace circsat
