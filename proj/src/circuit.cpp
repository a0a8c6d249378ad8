#include "circsat/circuit.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace circsat {

std::string Ref::to_string() const {
  switch (kind) {
  case RefKind::Constant:
    return index ? "CONST1" : "CONST0";
  case RefKind::Input:
    return "x" + std::to_string(index);
  case RefKind::Gate:
    return "g" + std::to_string(index);
  }
  return "?";
}

Assignment Assignment::from_index(int n, std::uint64_t index) {
  std::vector<bool> bits(n);
  for (int i = 0; i < n; ++i)
    bits[i] = (index >> i) & 1u;
  return Assignment(std::move(bits));
}

std::uint64_t Assignment::index() const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i])
      out |= std::uint64_t{1} << i;
  return out;
}

Ref Circuit::add_gate(GateOp op, Ref left, Ref right) {
  gates_.push_back({op, left, right});
  return Ref::gate(static_cast<std::uint32_t>(gates_.size()));
}

void Circuit::add_output(std::string label, Ref ref) {
  outputs_.push_back({std::move(label), ref});
}

std::vector<Violation> validate(const Circuit &c) {
  std::vector<Violation> out;
  const auto n = static_cast<std::uint32_t>(c.input_count());
  auto check_operand = [&](int gi, Ref r) {
    switch (r.kind) {
    case RefKind::Constant:
      out.push_back({Violation::Kind::InvalidOperand, gi,
                     "gate g" + std::to_string(gi) + " has a constant operand"});
      break;
    case RefKind::Input:
      if (r.index < 1 || r.index > n)
        out.push_back({Violation::Kind::InvalidOperand, gi,
                       "gate g" + std::to_string(gi) + " references unknown input " +
                           r.to_string()});
      break;
    case RefKind::Gate:
      if (r.index < 1)
        out.push_back({Violation::Kind::InvalidOperand, gi,
                       "gate g" + std::to_string(gi) + " references g0"});
      else if (r.index >= static_cast<std::uint32_t>(gi))
        out.push_back({Violation::Kind::ForwardReference, gi,
                       "gate g" + std::to_string(gi) + " references " + r.to_string() +
                           " which is not earlier"});
      break;
    }
  };
  for (int i = 1; i <= c.size(); ++i) {
    const Gate &g = c.gate(i);
    check_operand(i, g.left);
    check_operand(i, g.right);
    if (g.left == g.right)
      out.push_back({Violation::Kind::DuplicateOperand, i,
                     "gate g" + std::to_string(i) + " uses " + g.left.to_string() + " twice"});
  }
  std::set<std::string> labels;
  for (const Output &o : c.outputs()) {
    const Ref r = o.ref;
    const bool ok = (r.is_constant() && r.index <= 1) ||
                    (r.is_input() && r.index >= 1 && r.index <= n) ||
                    (r.is_gate() && r.index >= 1 && r.index <= static_cast<std::uint32_t>(c.size()));
    if (!ok)
      out.push_back({Violation::Kind::InvalidOutput, 0,
                     "output " + o.label + " references unknown " + r.to_string()});
    if (o.label.empty() || !labels.insert(o.label).second)
      out.push_back({Violation::Kind::DuplicateLabel, 0,
                     "output label '" + o.label + "' is empty or repeated"});
  }
  return out;
}

void require_valid(const Circuit &c) {
  const auto violations = validate(c);
  if (!violations.empty())
    throw std::invalid_argument("invalid circuit: " + violations.front().message);
}

std::vector<bool> evaluate(const Circuit &c, const Assignment &a) {
  if (static_cast<int>(a.size()) != c.input_count())
    throw std::invalid_argument("assignment has " + std::to_string(a.size()) +
                                " bits, circuit has " + std::to_string(c.input_count()) +
                                " inputs");
  std::vector<bool> values(c.size());
  auto value_of = [&](Ref r) -> bool {
    switch (r.kind) {
    case RefKind::Constant:
      return r.index != 0;
    case RefKind::Input:
      return a[r.index - 1];
    case RefKind::Gate:
      return values[r.index - 1];
    }
    return false;
  };
  for (int i = 0; i < c.size(); ++i) {
    const Gate &g = c.gates()[i];
    values[i] = g.op.apply(value_of(g.left), value_of(g.right));
  }
  std::vector<bool> out;
  out.reserve(c.output_count());
  for (const Output &o : c.outputs())
    out.push_back(value_of(o.ref));
  return out;
}

namespace {

void check_limit(const Circuit &c, int limit) {
  if (c.input_count() > limit)
    throw std::invalid_argument("circuit has " + std::to_string(c.input_count()) +
                                " inputs, above the exhaustive limit of " +
                                std::to_string(limit));
}

} // namespace

FunctionSpec truth_table(const Circuit &c, int limit) {
  check_limit(c, limit);
  if (c.output_count() == 0)
    throw std::invalid_argument("circuit has no outputs");
  FunctionSpec spec(c.input_count(), c.output_count());
  std::vector<std::string> labels;
  for (const Output &o : c.outputs())
    labels.push_back(o.label);
  spec.set_labels(std::move(labels));
  simulate(c, [&](std::uint64_t block, const auto &, const auto &outs) {
    for (std::size_t h = 0; h < outs.size(); ++h)
      spec.output(static_cast<int>(h)).words()[block] = outs[h];
  });
  for (int h = 0; h < spec.output_count(); ++h)
    spec.output(h).trim();
  return spec;
}

EquivalenceResult equivalent(const Circuit &c, const PartialSpec &spec, int limit) {
  check_limit(c, limit);
  if (spec.input_count() != c.input_count() || spec.output_count() != c.output_count())
    throw std::invalid_argument("dimension mismatch: circuit is " +
                                std::to_string(c.input_count()) + "->" +
                                std::to_string(c.output_count()) + ", spec is " +
                                std::to_string(spec.input_count()) + "->" +
                                std::to_string(spec.output_count()));
  EquivalenceResult result;
  const int n = c.input_count();
  std::uint64_t first_mask_block = 0;
  bool found = false;
  int best_output = 0;
  int best_bit = 64;
  // Stop scanning once a block contains a mismatch; simulate() has no early
  // exit, so later blocks are just skipped.
  simulate(c, [&](std::uint64_t block, const auto &, const auto &outs) {
    if (found)
      return;
    for (std::size_t h = 0; h < outs.size(); ++h) {
      const int hi = static_cast<int>(h);
      const std::uint64_t diff = (outs[h] ^ spec.value(hi).words()[block]) &
                                 spec.defined(hi).words()[block];
      if (diff) {
        const int bit = std::countr_zero(diff);
        if (bit < best_bit) {
          best_bit = bit;
          best_output = hi;
        }
        found = true;
      }
    }
    if (found)
      first_mask_block = block;
  });
  if (found)
    result.counterexample =
        Counterexample{Assignment::from_index(n, first_mask_block * 64 + best_bit), best_output};
  return result;
}

EquivalenceResult equivalent(const Circuit &c, const FunctionSpec &spec, int limit) {
  return equivalent(c, PartialSpec(spec), limit);
}

Circuit normalize(const Circuit &c) {
  std::vector<char> live(c.size() + 1, 0);
  for (const Output &o : c.outputs())
    if (o.ref.is_gate())
      live[o.ref.index] = 1;
  for (int i = c.size(); i >= 1; --i) {
    if (!live[i])
      continue;
    const Gate &g = c.gate(i);
    if (g.left.is_gate())
      live[g.left.index] = 1;
    if (g.right.is_gate())
      live[g.right.index] = 1;
  }
  std::vector<std::uint32_t> renum(c.size() + 1, 0);
  Circuit out(c.input_count());
  auto map = [&](Ref r) { return r.is_gate() ? Ref::gate(renum[r.index]) : r; };
  for (int i = 1; i <= c.size(); ++i) {
    if (!live[i])
      continue;
    const Gate &g = c.gate(i);
    renum[i] = out.add_gate(g.op, map(g.left), map(g.right)).index;
  }
  for (const Output &o : c.outputs())
    out.add_output(o.label, map(o.ref));
  return out;
}

int depth(const Circuit &c) {
  std::vector<int> d(c.size() + 1, 0);
  auto depth_of = [&](Ref r) { return r.is_gate() ? d[r.index] : 0; };
  for (int i = 1; i <= c.size(); ++i) {
    const Gate &g = c.gate(i);
    d[i] = 1 + std::max(depth_of(g.left), depth_of(g.right));
  }
  int out = 0;
  for (const Output &o : c.outputs())
    out = std::max(out, depth_of(o.ref));
  return out;
}

} // namespace circsat
