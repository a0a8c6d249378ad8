#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circsat/gate_op.hpp"
#include "circsat/spec.hpp"

namespace circsat {

enum class RefKind : std::uint8_t { Constant, Input, Gate };

/// Operand or output reference. Indices are 1-based; a constant carries its
/// bit in `index`. Ordering puts constants first, then x1..xn, then g1..gr.
struct Ref {
  RefKind kind = RefKind::Input;
  std::uint32_t index = 1;

  static constexpr Ref input(std::uint32_t i) { return {RefKind::Input, i}; }
  static constexpr Ref gate(std::uint32_t i) { return {RefKind::Gate, i}; }
  static constexpr Ref constant(bool b) { return {RefKind::Constant, b ? 1u : 0u}; }

  constexpr bool is_input() const { return kind == RefKind::Input; }
  constexpr bool is_gate() const { return kind == RefKind::Gate; }
  constexpr bool is_constant() const { return kind == RefKind::Constant; }

  /// "x3", "g7", "CONST0" or "CONST1".
  std::string to_string() const;

  constexpr auto operator<=>(const Ref &) const = default;
};

struct Gate {
  GateOp op;
  Ref left;
  Ref right;
  bool operator==(const Gate &) const = default;
};

struct Output {
  std::string label;
  Ref ref;
  bool operator==(const Output &) const = default;
};

/// Values of x1..xn.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::vector<bool> bits) : bits_(std::move(bits)) {}
  /// Assignment of n variables encoded by `index` (x1 = bit 0).
  static Assignment from_index(int n, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  std::uint64_t index() const;
  const std::vector<bool> &bits() const { return bits_; }

  bool operator==(const Assignment &) const = default;

private:
  std::vector<bool> bits_;
};

/// A straight-line program: n inputs, gates in topological order, labeled
/// outputs. Construction does not validate; see validate().
class Circuit {
public:
  Circuit() = default;
  explicit Circuit(int input_count) : input_count_(input_count) {}

  int input_count() const { return input_count_; }
  int output_count() const { return static_cast<int>(outputs_.size()); }
  /// Number of gates.
  int size() const { return static_cast<int>(gates_.size()); }

  const std::vector<Gate> &gates() const { return gates_; }
  const std::vector<Output> &outputs() const { return outputs_; }
  /// Gate by 1-based index.
  const Gate &gate(std::uint32_t index) const { return gates_.at(index - 1); }

  Ref add_gate(GateOp op, Ref left, Ref right);
  void add_output(std::string label, Ref ref);
  void set_output_ref(int h, Ref ref) { outputs_.at(h).ref = ref; }

  bool operator==(const Circuit &) const = default;

private:
  int input_count_ = 0;
  std::vector<Gate> gates_;
  std::vector<Output> outputs_;
};

struct Violation {
  enum class Kind {
    ForwardReference,
    DuplicateOperand,
    InvalidOperand,
    InvalidOutput,
    DuplicateLabel,
  };
  Kind kind;
  /// 1-based gate index, or 0 for output-level problems.
  int gate = 0;
  std::string message;
};

/// Every broken structural invariant; empty iff the circuit is well formed.
std::vector<Violation> validate(const Circuit &c);
/// Throws std::invalid_argument with the first violation, if any.
void require_valid(const Circuit &c);

/// Output bits of c on assignment a, in output order.
std::vector<bool> evaluate(const Circuit &c, const Assignment &a);

/// Default ceiling on n for whole-table operations.
inline constexpr int kExhaustiveLimit = 24;

FunctionSpec truth_table(const Circuit &c, int limit = kExhaustiveLimit);

/// Bit-parallel simulation. `visit(block, gate_words, output_words)` is called
/// for each block of 64 consecutive assignments; for n < 6 only the low 2^n
/// bits of the words are meaningful.
template <typename Visitor>
void simulate(const Circuit &c, Visitor &&visit);

struct Counterexample {
  Assignment assignment;
  int output = 0;
};

/// Empty on success; otherwise the first mismatch in assignment-index order,
/// ties broken by the lowest output index.
struct EquivalenceResult {
  std::optional<Counterexample> counterexample;
  bool ok() const { return !counterexample.has_value(); }
};

EquivalenceResult equivalent(const Circuit &c, const PartialSpec &spec,
                             int limit = kExhaustiveLimit);
EquivalenceResult equivalent(const Circuit &c, const FunctionSpec &spec,
                             int limit = kExhaustiveLimit);

/// Drops gates with no path to an output and renumbers survivors in their
/// original relative order.
Circuit normalize(const Circuit &c);

/// Fixes the given inputs (1-based index -> bit), propagates constants,
/// eliminates gates that become constant or a copy of one operand, merges
/// structurally identical gates and renumbers surviving inputs in order.
/// Constant outputs are expressed as CONST0/CONST1 output refs.
Circuit restrict(const Circuit &c, const std::map<int, bool> &fixed);

/// restrict() with nothing fixed: removes degenerate and duplicate gates.
Circuit simplify(const Circuit &c);

/// Length of the longest input-to-output path in gates.
int depth(const Circuit &c);

// ---------------------------------------------------------------------------

template <typename Visitor>
void simulate(const Circuit &c, Visitor &&visit) {
  const int n = c.input_count();
  const std::uint64_t blocks = n >= 6 ? (std::uint64_t{1} << (n - 6)) : 1;
  std::vector<std::uint64_t> inputs(n);
  std::vector<std::uint64_t> gates(c.size());
  std::vector<std::uint64_t> outputs(c.output_count());
  auto word_of = [&](Ref r) -> std::uint64_t {
    switch (r.kind) {
    case RefKind::Constant:
      return r.index ? ~std::uint64_t{0} : 0;
    case RefKind::Input:
      return inputs[r.index - 1];
    case RefKind::Gate:
      return gates[r.index - 1];
    }
    return 0;
  };
  for (std::uint64_t block = 0; block < blocks; ++block) {
    for (int i = 0; i < n; ++i)
      inputs[i] = variable_word(i, block);
    for (std::size_t g = 0; g < gates.size(); ++g) {
      const Gate &gate = c.gates()[g];
      gates[g] = gate.op.apply(word_of(gate.left), word_of(gate.right));
    }
    for (std::size_t h = 0; h < outputs.size(); ++h)
      outputs[h] = word_of(c.outputs()[h].ref);
    visit(block, std::as_const(gates), std::as_const(outputs));
  }
}

} // namespace circsat
