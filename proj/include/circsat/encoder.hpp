#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "circsat/circuit.hpp"
#include "circsat/cnf.hpp"
#include "circsat/spec.hpp"

namespace circsat {

struct FixedGate {
  GateOp op;
  Ref left;
  Ref right;
};

/// Structural side conditions for synthesis.
struct SynthesisConstraints {
  /// Gate index (1-based) -> required gate.
  std::map<int, FixedGate> fixed_gates;
  /// (source, target gate index): source may not feed that gate.
  std::set<std::pair<Ref, int>> forbidden_wires;
  /// Output index (0-based) -> required ref.
  std::map<int, Ref> fixed_outputs;
  /// Refs no output may select.
  std::set<Ref> forbidden_output_refs;
  /// Exclude constant and single-operand tables.
  bool forbid_degenerate_ops = true;
  /// Every gate must feed a later gate or an output.
  bool symmetry_breaking = false;
  /// Restricts to a form every circuit of the given size can be rewritten
  /// into: live gates first, neighbouring live gates where the later does not
  /// read the earlier in lexicographic operand order, then gates feeding
  /// nothing as AND(x1, x2). Satisfiability is unchanged. Not allowed with
  /// constraints that name gate positions.
  bool canonical_order = false;
};

/// Variable layout of one encoding; the README lists the numbering.
class VarMap {
public:
  VarMap(std::shared_ptr<const PartialSpec> spec, int gates);

  int input_count() const { return n_; }
  int output_count() const { return m_; }
  int gate_count() const { return r_; }
  int variable_count() const { return total_; }
  const PartialSpec &spec() const { return *spec_; }
  std::shared_ptr<const PartialSpec> spec_ptr() const { return spec_; }
  /// Care assignments in index order; value variables follow this order.
  const std::vector<std::uint64_t> &care() const { return care_; }

  /// Operation bit of gate i (1-based) on operands (a, b).
  int op(int i, int a, int b) const { return 4 * (i - 1) + 2 * a + b + 1; }
  /// Gate i reads refs j < k, where refs 1..n are inputs and n+g is gate g.
  int select(int i, int j, int k) const;
  /// Value of gate i on the care assignment at position p of care().
  int value(int i, std::size_t p) const {
    return value_base_ + (i - 1) * static_cast<int>(care_.size()) + static_cast<int>(p) + 1;
  }
  /// Output h (0-based) reads ref t in 1..n+r.
  int output(int h, int t) const { return output_base_ + h * (n_ + r_) + (t - 1) + 1; }

  /// Ref number t for a circuit Ref, and back.
  int ref_number(Ref r) const;
  Ref ref_of(int t) const;

private:
  std::shared_ptr<const PartialSpec> spec_;
  int n_;
  int m_;
  int r_;
  std::vector<std::uint64_t> care_;
  std::vector<int> select_base_;
  int value_base_ = 0;
  int output_base_ = 0;
  int total_ = 0;
};

struct Encoding {
  CnfFormula formula;
  VarMap varmap;
};

/// CNF that is satisfiable iff a circuit with exactly `gates` gates computes
/// spec on its care set under the constraints. Throws std::invalid_argument
/// for contradictory or malformed constraints.
Encoding encode_synthesis(const PartialSpec &spec, int gates,
                          const SynthesisConstraints &constraints = {});

class DecodeError : public std::runtime_error {
public:
  enum class Kind { ExactlyOne, Verification };
  DecodeError(Kind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Circuit described by a model (model[v - 1] = variable v); re-verified
/// against the target before returning.
Circuit decode_model(const VarMap &varmap, const std::vector<bool> &model);

} // namespace circsat
