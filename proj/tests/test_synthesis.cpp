#include <gtest/gtest.h>

#include "circsat/functions.hpp"
#include "circsat/synthesis.hpp"
#include "test_util.hpp"

using namespace circsat;

namespace {

SolverConfig config() {
  SolverConfig c;
  c.time_limit = 3600;
  return c;
}

FindResult find(const FunctionSpec &f, int size) {
  return find_circuit(PartialSpec(f), size, {}, config());
}

void expect_found(const FindResult &r, const FunctionSpec &f, int size) {
  ASSERT_EQ(r.status, FindStatus::Found) << r.detail;
  ASSERT_TRUE(r.circuit);
  EXPECT_EQ(r.circuit->size(), size);
  EXPECT_TRUE(validate(*r.circuit).empty());
  EXPECT_TRUE(equivalent(*r.circuit, f).ok());
}

void expect_proven(const FunctionSpec &f, int start, int expected) {
  const MinResult r = find_min_circuit(PartialSpec(f), start, 0, {}, config());
  EXPECT_EQ(r.status, MinStatus::ProvenMinimal);
  EXPECT_EQ(r.circuit.size(), expected);
  EXPECT_TRUE(equivalent(r.circuit, f).ok());
  ASSERT_FALSE(r.probes.empty());
  EXPECT_EQ(r.probes.back().status, FindStatus::Unsat);
  EXPECT_EQ(r.probes.back().size, expected - 1);
}

} // namespace

TEST(FindCircuit, SmallAdders) {
  expect_found(find(family_sum(2), 2), family_sum(2), 2);
  expect_found(find(family_sum(3), 5), family_sum(3), 5);
  EXPECT_EQ(find(family_sum(2), 1).status, FindStatus::Unsat);
  EXPECT_EQ(find(family_sum(3), 4).status, FindStatus::Unsat);
}

TEST(FindCircuit, ReportsFormulaSize) {
  const FindResult r = find(family_sum(2), 2);
  // 28 layout variables plus one canonical-order flag per gate
  EXPECT_EQ(r.variables, 30);
  EXPECT_GT(r.clauses, 0u);
  EXPECT_GE(r.solver_seconds, 0);
}

TEST(FindCircuit, Mod4SatSide) {
  expect_found(find(family_mod(4, 3, 0), 7), family_mod(4, 3, 0), 7);
  expect_found(find(family_mod(4, 3, 1), 7), family_mod(4, 3, 1), 7);
  expect_found(find(family_mod(4, 3, 2), 6), family_mod(4, 3, 2), 6);
}

TEST(FindCircuit, Mod4Rem2AtFiveIsUnsat) {
  EXPECT_EQ(find(family_mod(4, 3, 2), 5).status, FindStatus::Unsat);
}

TEST(FindCircuit, Timeout) {
  SolverConfig c;
  c.time_limit = 0.05;
  const FindResult r = find_circuit(PartialSpec(family_mod(5, 3, 0)), 8, {}, c);
  EXPECT_EQ(r.status, FindStatus::Unknown);
  EXPECT_EQ(r.reason, UnknownReason::Timeout);
  EXPECT_FALSE(r.circuit);
}

TEST(FindMin, ProvenMinimal) {
  expect_proven(family_sum(2), 2, 2);
  expect_proven(family_sum(3), 5, 5);
  expect_proven(family_mod(4, 3, 2), 8, 6);
}

TEST(FindMin, ProbeOrder) {
  const MinResult r = find_min_circuit(PartialSpec(family_sum(2)), 4, 0, {}, config());
  std::vector<int> sizes;
  for (const FindResult &p : r.probes)
    sizes.push_back(p.size);
  EXPECT_EQ(sizes, (std::vector<int>{4, 3, 2, 1}));
  EXPECT_EQ(r.circuit.size(), 2);
}

TEST(FindMin, FloorLeavesBestFound) {
  const MinResult r = find_min_circuit(PartialSpec(family_sum(3)), 6, 5, {}, config());
  EXPECT_EQ(r.status, MinStatus::BestFound);
  EXPECT_EQ(r.circuit.size(), 5);
  EXPECT_EQ(r.probes.size(), 2u);
}

TEST(FindMin, ZeroGatesIsMinimal) {
  FunctionSpec f(2, 1);
  for (std::uint64_t x = 0; x < 4; ++x)
    f.set(0, x, x & 1);
  const MinResult r = find_min_circuit(PartialSpec(f), 2, 0, {}, config());
  EXPECT_EQ(r.status, MinStatus::ProvenMinimal);
  EXPECT_EQ(r.circuit.size(), 0);
}

TEST(FindMin, FirstProbeFails) {
  try {
    find_min_circuit(PartialSpec(family_sum(3)), 4, 0, {}, config());
    FAIL() << "expected SearchError";
  } catch (const SearchError &e) {
    EXPECT_EQ(e.probe().status, FindStatus::Unsat);
    EXPECT_EQ(e.probe().size, 4);
  }
}

TEST(FindMin, Mod3SmallTable) {
  const int expected[] = {3, 4, 4};
  for (int r = 0; r < 3; ++r)
    expect_proven(family_mod(3, 3, r), 6, expected[r]);
}

TEST(XorChain, Constraints) {
  const SynthesisConstraints c = xor_chain_constraints(4, 9);
  ASSERT_EQ(c.fixed_gates.size(), 3u);
  EXPECT_EQ(c.fixed_gates.at(1).op, GateOp::XOR());
  EXPECT_EQ(c.fixed_gates.at(1).left, Ref::input(1));
  EXPECT_EQ(c.fixed_gates.at(1).right, Ref::input(2));
  EXPECT_EQ(c.fixed_gates.at(3).left, Ref::gate(2));
  EXPECT_EQ(c.fixed_gates.at(3).right, Ref::input(4));
  for (std::uint32_t i = 2; i <= 4; ++i) {
    EXPECT_TRUE(c.forbidden_output_refs.count(Ref::input(i)));
    for (int g = i; g <= 9; ++g)
      EXPECT_TRUE(c.forbidden_wires.count({Ref::input(i), g})) << i << ' ' << g;
  }
  EXPECT_THROW(xor_chain_constraints(4, 2), std::invalid_argument);
}

TEST(XorChain, Sum3) {
  const FindResult r = find_with_structure(PartialSpec(family_sum(3)), 5, true, config());
  expect_found(r, family_sum(3), 5);
  const Circuit &c = *r.circuit;
  EXPECT_EQ(c.gate(1), (Gate{GateOp::XOR(), Ref::input(1), Ref::input(2)}));
  EXPECT_EQ(c.gate(2), (Gate{GateOp::XOR(), Ref::input(3), Ref::gate(1)}));
  EXPECT_EQ(c.outputs()[0].ref, Ref::gate(2));
  for (std::uint32_t g = 3; g <= 5; ++g)
    for (Ref operand : {c.gate(g).left, c.gate(g).right})
      EXPECT_TRUE(operand == Ref::input(1) || operand.is_gate()) << g;
  EXPECT_EQ(find_with_structure(PartialSpec(family_sum(3)), 4, true, config()).status,
            FindStatus::Unsat);
}

TEST(Slow, Mod5Rem1) {
  if (!testutil::slow_enabled())
    GTEST_SKIP() << "set CIRCSAT_SLOW=1";
  expect_found(find(family_mod(5, 3, 1), 9), family_mod(5, 3, 1), 9);
}

TEST(Slow, XorChainSum4) {
  if (!testutil::slow_enabled())
    GTEST_SKIP() << "set CIRCSAT_SLOW=1";
  const FindResult r = find_with_structure(PartialSpec(family_sum(4)), 9, true, config());
  expect_found(r, family_sum(4), 9);
}
