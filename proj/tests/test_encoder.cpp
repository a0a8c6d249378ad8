#include <gtest/gtest.h>

#include <random>
#include <set>

#include "circsat/encoder.hpp"
#include "circsat/functions.hpp"
#include "circsat/solver.hpp"
#include "test_util.hpp"

using namespace circsat;

namespace {

// Truth tables (bit x = value on assignment x) computable as some ref of a
// circuit with exactly r gates over n inputs, each gate a non-degenerate
// binary operation on two distinct earlier refs. With all_used, every gate
// must feed a later gate or be the selected output.
std::set<std::uint32_t> brute_force_functions(int n, int r, bool all_used) {
  const int rows = 1 << n;
  const std::uint32_t mask = rows == 32 ? 0xFFFFFFFFu : (1u << rows) - 1;
  std::vector<std::uint32_t> refs;
  for (int i = 0; i < n; ++i) {
    std::uint32_t t = 0;
    for (int x = 0; x < rows; ++x)
      if ((x >> i) & 1)
        t |= 1u << x;
    refs.push_back(t);
  }
  std::vector<int> ops;
  for (int op = 0; op < 16; ++op) {
    const bool dep_a = ((op >> 0) & 1) != ((op >> 2) & 1) || ((op >> 1) & 1) != ((op >> 3) & 1);
    const bool dep_b = ((op >> 0) & 1) != ((op >> 1) & 1) || ((op >> 2) & 1) != ((op >> 3) & 1);
    if (dep_a && dep_b)
      ops.push_back(op);
  }
  std::set<std::uint32_t> out;
  std::vector<std::pair<int, int>> operands(r);
  std::function<void(int)> rec = [&](int g) {
    if (g == r) {
      const int total = n + r;
      for (int t = 0; t < total; ++t) {
        if (all_used) {
          bool ok = true;
          for (int gate = 0; gate < r && ok; ++gate) {
            const int id = n + gate;
            bool used = id == t;
            for (int later = gate + 1; later < r; ++later)
              used |= operands[later].first == id || operands[later].second == id;
            ok = used;
          }
          if (!ok)
            continue;
        }
        out.insert(refs[t] & mask);
      }
      return;
    }
    const int avail = n + g;
    for (int j = 0; j < avail; ++j)
      for (int k = j + 1; k < avail; ++k)
        for (int op : ops) {
          std::uint32_t v = 0;
          for (int x = 0; x < rows; ++x) {
            const int a = (refs[j] >> x) & 1, b = (refs[k] >> x) & 1;
            v |= static_cast<std::uint32_t>((op >> (2 * a + b)) & 1) << x;
          }
          refs.push_back(v);
          operands[g] = {j, k};
          rec(g + 1);
          refs.pop_back();
        }
  };
  rec(0);
  return out;
}

PartialSpec single_output(int n, std::uint32_t table) {
  FunctionSpec f(n, 1);
  for (int x = 0; x < (1 << n); ++x)
    f.set(0, x, (table >> x) & 1);
  return PartialSpec(f);
}

bool sat(const PartialSpec &spec, int r, const SynthesisConstraints &c = {}) {
  const Encoding e = encode_synthesis(spec, r, c);
  const SolverVerdict v = solve_embedded(e.formula);
  EXPECT_FALSE(v.unknown());
  if (v.sat()) {
    const Circuit circuit = decode_model(e.varmap, v.model);
    EXPECT_EQ(circuit.size(), r);
    EXPECT_TRUE(equivalent(circuit, spec).ok());
  }
  return v.sat();
}

} // namespace

TEST(VarMap, Sum2Layout) {
  const Encoding e = encode_synthesis(PartialSpec(family_sum(2)), 2);
  EXPECT_EQ(e.formula.variable_count, 28);
  const VarMap &vm = e.varmap;
  EXPECT_EQ(vm.op(1, 0, 0), 1);
  EXPECT_EQ(vm.op(2, 1, 1), 8);
  EXPECT_EQ(vm.select(1, 1, 2), 9);
  EXPECT_EQ(vm.select(2, 1, 2), 10);
  EXPECT_EQ(vm.select(2, 1, 3), 11);
  EXPECT_EQ(vm.select(2, 2, 3), 12);
  EXPECT_EQ(vm.value(1, 0), 13);
  EXPECT_EQ(vm.value(2, 3), 20);
  EXPECT_EQ(vm.output(0, 1), 21);
  EXPECT_EQ(vm.output(1, 4), 28);
}

TEST(VarMap, Bijective) {
  PartialSpec spec(family_mod(4, 3, 1));
  spec.drop(5);
  spec.drop(9);
  const VarMap vm(std::make_shared<PartialSpec>(spec), 3);
  std::vector<int> seen;
  const int n = 4, r = 3;
  for (int i = 1; i <= r; ++i) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        seen.push_back(vm.op(i, a, b));
    for (int j = 1; j <= n + i - 1; ++j)
      for (int k = j + 1; k <= n + i - 1; ++k)
        seen.push_back(vm.select(i, j, k));
  }
  for (int i = 1; i <= r; ++i)
    for (std::size_t p = 0; p < vm.care().size(); ++p)
      seen.push_back(vm.value(i, p));
  for (int t = 1; t <= n + r; ++t)
    seen.push_back(vm.output(0, t));
  std::sort(seen.begin(), seen.end());
  ASSERT_EQ(static_cast<int>(seen.size()), vm.variable_count());
  for (std::size_t i = 0; i < seen.size(); ++i)
    EXPECT_EQ(seen[i], static_cast<int>(i + 1));
  EXPECT_EQ(vm.care().size(), 14u);
  for (int t = 1; t <= n + r; ++t)
    EXPECT_EQ(vm.ref_number(vm.ref_of(t)), t);
}

TEST(Encoder, FormulaShape) {
  const Encoding a = encode_synthesis(PartialSpec(family_mod(4, 3, 2)), 4);
  const Encoding b = encode_synthesis(PartialSpec(family_mod(4, 3, 2)), 4);
  EXPECT_EQ(emit_dimacs(a.formula), emit_dimacs(b.formula));
  for (const auto &clause : a.formula.clauses) {
    ASSERT_FALSE(clause.empty());
    for (int lit : clause)
      ASSERT_TRUE(lit != 0 && std::abs(lit) <= a.formula.variable_count);
  }
}

TEST(Encoder, ZeroGatesProjection) {
  FunctionSpec f(1, 1);
  f.set(0, 1, true);
  const Encoding e = encode_synthesis(PartialSpec(f), 0);
  EXPECT_EQ(e.formula.variable_count, 1);
  const SolverVerdict v = solve_embedded(e.formula);
  ASSERT_TRUE(v.sat());
  const Circuit c = decode_model(e.varmap, v.model);
  EXPECT_EQ(c.size(), 0);
  EXPECT_EQ(c.outputs()[0].ref, Ref::input(1));
  EXPECT_THROW(encode_synthesis(PartialSpec(f), 1), std::invalid_argument);
  EXPECT_THROW(encode_synthesis(PartialSpec(f), -1), std::invalid_argument);
}

TEST(Encoder, HalfAdderDecodes) {
  const Encoding e = encode_synthesis(PartialSpec(family_sum(2)), 2);
  const SolverVerdict v = solve_embedded(e.formula);
  ASSERT_TRUE(v.sat());
  const Circuit c = decode_model(e.varmap, v.model);
  std::multiset<std::uint8_t> ops;
  for (const Gate &g : c.gates())
    ops.insert(g.op.table());
  EXPECT_EQ(ops, (std::multiset<std::uint8_t>{GateOp::XOR().table(), GateOp::AND().table()}));
  EXPECT_FALSE(sat(PartialSpec(family_sum(2)), 1));
}

TEST(Encoder, Mod4Rem2AtSixIsSat) {
  EXPECT_TRUE(sat(PartialSpec(family_mod(4, 3, 2)), 6));
}

TEST(Decode, ExactlyOneFault) {
  const Encoding e = encode_synthesis(PartialSpec(family_sum(2)), 2);
  std::vector<bool> model = solve_embedded(e.formula).model;
  const int extra = model[e.varmap.select(2, 1, 2) - 1] ? e.varmap.select(2, 1, 3)
                                                        : e.varmap.select(2, 1, 2);
  model[extra - 1] = true;
  try {
    decode_model(e.varmap, model);
    FAIL() << "expected a decode error";
  } catch (const DecodeError &err) {
    EXPECT_EQ(err.kind(), DecodeError::Kind::ExactlyOne);
  }
  EXPECT_THROW(decode_model(e.varmap, std::vector<bool>(5)), std::invalid_argument);
}

TEST(Decode, VerificationFault) {
  const Encoding e = encode_synthesis(PartialSpec(family_sum(2)), 2);
  std::vector<bool> model = solve_embedded(e.formula).model;
  // Flip every op bit of gate 1: still one topology, wrong function.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      model[e.varmap.op(1, a, b) - 1] = !model[e.varmap.op(1, a, b) - 1];
  try {
    decode_model(e.varmap, model);
    FAIL() << "expected a decode error";
  } catch (const DecodeError &err) {
    EXPECT_EQ(err.kind(), DecodeError::Kind::Verification);
  }
}

// Exact SAT/UNSAT agreement with exhaustive enumeration of circuits.
TEST(Encoder, CompleteAgainstBruteForce) {
  for (int n = 2; n <= 3; ++n)
    for (int r = 0; r <= 3; ++r)
      for (bool all_used : {false, true}) {
        const auto reachable = brute_force_functions(n, r, all_used);
        SynthesisConstraints c;
        c.symmetry_breaking = all_used;
        for (std::uint32_t t = 0; t < (1u << (1 << n)); ++t)
          ASSERT_EQ(sat(single_output(n, t), r, c), reachable.count(t) > 0)
              << "n=" << n << " r=" << r << " table=" << t << " all_used=" << all_used;
      }
}

// The canonical form must not change satisfiability.
TEST(Encoder, CanonicalOrderAgainstBruteForce) {
  SynthesisConstraints c;
  c.canonical_order = true;
  for (int n = 2; n <= 3; ++n)
    for (int r = 0; r <= 3; ++r) {
      const auto reachable = brute_force_functions(n, r, false);
      for (std::uint32_t t = 0; t < (1u << (1 << n)); ++t)
        ASSERT_EQ(sat(single_output(n, t), r, c), reachable.count(t) > 0)
            << "n=" << n << " r=" << r << " table=" << t;
    }
  // Two outputs exercise ordering between gates feeding different outputs.
  for (int r = 1; r <= 4; ++r) {
    SynthesisConstraints plain;
    EXPECT_EQ(sat(PartialSpec(family_sum(3)), r, c), sat(PartialSpec(family_sum(3)), r, plain));
  }
  EXPECT_TRUE(sat(PartialSpec(family_sum(3)), 7, c));
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    FunctionSpec f(3, 2);
    for (int h = 0; h < 2; ++h)
      for (int x = 0; x < 8; ++x)
        f.set(h, x, rng() & 1);
    const int r = 1 + trial % 4;
    ASSERT_EQ(sat(PartialSpec(f), r, c), sat(PartialSpec(f), r)) << trial;
  }
  SynthesisConstraints bad = c;
  bad.fixed_outputs[0] = Ref::gate(1);
  EXPECT_THROW(encode_synthesis(PartialSpec(family_sum(2)), 2, bad), std::invalid_argument);
}

TEST(Encoder, DontCaresAgainstBruteForce) {
  std::mt19937 rng(99);
  const int n = 3;
  for (int r = 1; r <= 2; ++r) {
    const auto reachable = brute_force_functions(n, r, false);
    for (int trial = 0; trial < 60; ++trial) {
      const std::uint32_t value = rng() & 0xFF;
      const std::uint32_t care = rng() & 0xFF;
      if (!care)
        continue;
      PartialSpec spec(n, 1);
      for (int x = 0; x < 8; ++x) {
        if ((care >> x) & 1)
          spec.set(0, x, (value >> x) & 1 ? Tri::One : Tri::Zero);
      }
      bool expected = false;
      for (std::uint32_t t : reachable)
        expected |= ((t ^ value) & care) == 0;
      ASSERT_EQ(sat(spec, r), expected) << value << ' ' << care;
    }
  }
}

TEST(Encoder, Monotone) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const PartialSpec spec = single_output(3, rng() & 0xFF);
    bool prev = false;
    for (int r = 0; r <= 4; ++r) {
      const bool now = sat(spec, r);
      if (prev)
        ASSERT_TRUE(now);
      prev = now;
    }
  }
}

TEST(Constraints, FixedGatesOutputsAndWires) {
  const PartialSpec spec(family_sum(2));
  SynthesisConstraints c;
  c.fixed_gates[2] = {GateOp::XOR(), Ref::input(1), Ref::input(2)};
  c.fixed_outputs[1] = Ref::gate(1);
  const Encoding e = encode_synthesis(spec, 2, c);
  const SolverVerdict v = solve_embedded(e.formula);
  ASSERT_TRUE(v.sat());
  const Circuit circuit = decode_model(e.varmap, v.model);
  EXPECT_EQ(circuit.gate(2).op, GateOp::XOR());
  EXPECT_EQ(circuit.outputs()[1].ref, Ref::gate(1));

  // Operands given in reverse order keep their meaning.
  SynthesisConstraints rev;
  rev.fixed_gates[1] = {GateOp::GT(), Ref::input(2), Ref::input(1)};
  const Encoding e2 = encode_synthesis(single_output(2, 0b0100), 1, rev);
  EXPECT_TRUE(solve_embedded(e2.formula).sat());
  const Encoding e3 = encode_synthesis(single_output(2, 0b0010), 1, rev);
  EXPECT_TRUE(solve_embedded(e3.formula).unsat());

  SynthesisConstraints wires;
  wires.forbidden_wires.insert({Ref::input(1), 1});
  wires.forbidden_wires.insert({Ref::input(1), 2});
  EXPECT_FALSE(sat(spec, 2, wires));

  SynthesisConstraints clash;
  clash.fixed_gates[1] = {GateOp::XOR(), Ref::input(1), Ref::input(2)};
  clash.forbidden_wires.insert({Ref::input(2), 1});
  EXPECT_THROW(encode_synthesis(spec, 2, clash), std::invalid_argument);

  SynthesisConstraints forward;
  forward.fixed_gates[1] = {GateOp::XOR(), Ref::input(1), Ref::gate(2)};
  EXPECT_THROW(encode_synthesis(spec, 2, forward), std::invalid_argument);

  SynthesisConstraints no_proj;
  no_proj.forbidden_output_refs.insert(Ref::input(1));
  EXPECT_FALSE(sat(single_output(2, 0b1010), 0, no_proj));
  EXPECT_TRUE(sat(single_output(2, 0b1010), 0));
}

TEST(Constraints, DegenerateOps) {
  // x1 alone needs a degenerate gate when forced to use one gate reading x2
  SynthesisConstraints c;
  c.fixed_outputs[0] = Ref::gate(1);
  EXPECT_FALSE(sat(single_output(2, 0b1010), 1, c));
  c.forbid_degenerate_ops = false;
  EXPECT_TRUE(sat(single_output(2, 0b1010), 1, c));
}
