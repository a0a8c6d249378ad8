#include "circsat/encoder.hpp"

#include <optional>
#include <string>

namespace circsat {

VarMap::VarMap(std::shared_ptr<const PartialSpec> spec, int gates)
    : spec_(std::move(spec)), n_(spec_->input_count()), m_(spec_->output_count()), r_(gates),
      care_(spec_->care_assignments()) {
  int next = 4 * r_;
  select_base_.resize(r_ + 1, 0);
  for (int i = 1; i <= r_; ++i) {
    select_base_[i] = next;
    const int refs = n_ + i - 1;
    next += refs * (refs - 1) / 2;
  }
  value_base_ = next;
  next += r_ * static_cast<int>(care_.size());
  output_base_ = next;
  next += m_ * (n_ + r_);
  total_ = next;
}

int VarMap::select(int i, int j, int k) const {
  const int refs = n_ + i - 1;
  // Position of (j, k) among pairs of 1..refs in lexicographic order.
  const int before = (j - 1) * (2 * refs - j) / 2;
  return select_base_[i] + before + (k - j - 1) + 1;
}

int VarMap::ref_number(Ref r) const {
  if (r.is_input() && r.index >= 1 && static_cast<int>(r.index) <= n_)
    return static_cast<int>(r.index);
  if (r.is_gate() && r.index >= 1 && static_cast<int>(r.index) <= r_)
    return n_ + static_cast<int>(r.index);
  throw std::invalid_argument("ref " + r.to_string() + " is not available in this encoding");
}

Ref VarMap::ref_of(int t) const {
  return t <= n_ ? Ref::input(static_cast<std::uint32_t>(t))
                 : Ref::gate(static_cast<std::uint32_t>(t - n_));
}

namespace {

/// Builds clauses while folding literals whose value is known.
class ClauseBuilder {
public:
  void reset() {
    lits_.clear();
    satisfied_ = false;
  }
  void lit(int l) { lits_.push_back(l); }
  /// A literal that is constantly `value`.
  void constant(bool value) {
    if (value)
      satisfied_ = true;
  }
  void emit(CnfFormula &f) {
    if (!satisfied_)
      f.add_clause(lits_);
  }
  bool satisfied() const { return satisfied_; }

private:
  std::vector<int> lits_;
  bool satisfied_ = false;
};

bool input_bit(std::uint64_t x, int j) { return (x >> (j - 1)) & 1u; }

} // namespace

Encoding encode_synthesis(const PartialSpec &spec_in, int r, const SynthesisConstraints &cons) {
  if (r < 0)
    throw std::invalid_argument("gate count must be non-negative");
  auto spec = std::make_shared<const PartialSpec>(spec_in);
  const int n = spec->input_count();
  const int m = spec->output_count();
  if (r >= 1 && n < 2)
    throw std::invalid_argument("a circuit with gates needs at least two inputs");
  VarMap vm(spec, r);
  if (vm.care().empty())
    throw std::invalid_argument("target function has an empty care set");
  const auto &care = vm.care();

  // Constraint sanity.
  for (const auto &[src, target] : cons.forbidden_wires)
    if (target < 1 || target > r)
      throw std::invalid_argument("forbidden wire targets unknown gate g" + std::to_string(target));
  for (const auto &[i, g] : cons.fixed_gates) {
    if (i < 1 || i > r)
      throw std::invalid_argument("fixed gate g" + std::to_string(i) + " outside 1.." +
                                  std::to_string(r));
    for (Ref op : {g.left, g.right}) {
      if (op.is_constant() || (op.is_gate() && static_cast<int>(op.index) >= i))
        throw std::invalid_argument("fixed gate g" + std::to_string(i) +
                                    " reads an invalid or later ref " + op.to_string());
      vm.ref_number(op);
      if (cons.forbidden_wires.count({op, i}))
        throw std::invalid_argument("fixed gate g" + std::to_string(i) + " uses forbidden wire " +
                                    op.to_string() + " -> g" + std::to_string(i));
    }
    if (g.left == g.right)
      throw std::invalid_argument("fixed gate g" + std::to_string(i) + " repeats an operand");
    if (cons.forbid_degenerate_ops && g.op.is_degenerate())
      throw std::invalid_argument("fixed gate g" + std::to_string(i) + " has a degenerate table");
  }
  for (const auto &[h, ref] : cons.fixed_outputs) {
    if (h < 0 || h >= m)
      throw std::invalid_argument("fixed output index " + std::to_string(h) + " out of range");
    vm.ref_number(ref);
    if (cons.forbidden_output_refs.count(ref))
      throw std::invalid_argument("output fixed to forbidden ref " + ref.to_string());
  }

  if (cons.canonical_order) {
    bool names_gate = !cons.fixed_gates.empty() || !cons.forbidden_wires.empty();
    for (const auto &[h, ref] : cons.fixed_outputs)
      names_gate |= ref.is_gate();
    for (Ref ref : cons.forbidden_output_refs)
      names_gate |= ref.is_gate();
    if (names_gate)
      throw std::invalid_argument("canonical_order cannot be combined with constraints on gate positions");
  }

  CnfFormula f;
  f.variable_count = vm.variable_count();
  ClauseBuilder cb;

  // (a) exactly one operand pair per gate.
  for (int i = 1; i <= r; ++i) {
    const int refs = n + i - 1;
    std::vector<int> all;
    for (int j = 1; j <= refs; ++j)
      for (int k = j + 1; k <= refs; ++k)
        all.push_back(vm.select(i, j, k));
    f.add_clause(all);
    for (std::size_t p = 0; p < all.size(); ++p)
      for (std::size_t q = p + 1; q < all.size(); ++q)
        f.add_clause({-all[p], -all[q]});
  }

  // (b) gate semantics. "val(t, x) != a" is a constant for inputs.
  auto differs = [&](int t, std::size_t p, int a) {
    if (t <= n)
      cb.constant(input_bit(care[p], t) != (a != 0));
    else
      cb.lit(a ? -vm.value(t - n, p) : vm.value(t - n, p));
  };
  for (int i = 1; i <= r; ++i) {
    const int refs = n + i - 1;
    for (int j = 1; j <= refs; ++j)
      for (int k = j + 1; k <= refs; ++k) {
        const int s = vm.select(i, j, k);
        for (std::size_t p = 0; p < care.size(); ++p)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int polarity = 0; polarity < 2; ++polarity) {
                cb.reset();
                cb.lit(-s);
                differs(j, p, a);
                differs(k, p, b);
                if (cb.satisfied())
                  continue;
                const int v = vm.value(i, p);
                const int op = vm.op(i, a, b);
                if (polarity == 0) {
                  cb.lit(v);
                  cb.lit(-op);
                } else {
                  cb.lit(-v);
                  cb.lit(op);
                }
                cb.emit(f);
              }
      }
  }

  // (c) exactly one source per output.
  for (int h = 0; h < m; ++h) {
    std::vector<int> all;
    for (int t = 1; t <= n + r; ++t)
      all.push_back(vm.output(h, t));
    f.add_clause(all);
    for (std::size_t p = 0; p < all.size(); ++p)
      for (std::size_t q = p + 1; q < all.size(); ++q)
        f.add_clause({-all[p], -all[q]});
  }

  // (d) output correctness on defined bits.
  for (int h = 0; h < m; ++h) {
    for (int t = 1; t <= n; ++t) {
      bool mismatch = false;
      for (std::size_t p = 0; p < care.size() && !mismatch; ++p) {
        const Tri want = spec->at(h, care[p]);
        if (want != Tri::DontCare && input_bit(care[p], t) != (want == Tri::One))
          mismatch = true;
      }
      if (mismatch)
        f.add_clause({-vm.output(h, t)});
    }
    for (int g = 1; g <= r; ++g)
      for (std::size_t p = 0; p < care.size(); ++p) {
        const Tri want = spec->at(h, care[p]);
        if (want == Tri::DontCare)
          continue;
        const int v = vm.value(g, p);
        f.add_clause({-vm.output(h, n + g), want == Tri::One ? v : -v});
      }
  }

  // (e) structural constraints.
  for (const auto &[i, g] : cons.fixed_gates) {
    int j = vm.ref_number(g.left);
    int k = vm.ref_number(g.right);
    GateOp op = g.op;
    if (j > k) {
      std::swap(j, k);
      op = op.transposed();
    }
    f.add_clause({vm.select(i, j, k)});
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        f.add_clause({op.apply(a != 0, b != 0) ? vm.op(i, a, b) : -vm.op(i, a, b)});
  }
  for (const auto &[src, i] : cons.forbidden_wires) {
    const int t = vm.ref_number(src);
    const int refs = n + i - 1;
    if (t > refs)
      continue;
    for (int o = 1; o <= refs; ++o)
      if (o != t)
        f.add_clause({-vm.select(i, std::min(o, t), std::max(o, t))});
  }
  for (const auto &[h, ref] : cons.fixed_outputs)
    f.add_clause({vm.output(h, vm.ref_number(ref))});
  for (Ref ref : cons.forbidden_output_refs) {
    const int t = vm.ref_number(ref);
    for (int h = 0; h < m; ++h)
      f.add_clause({-vm.output(h, t)});
  }

  // (f) non-degenerate tables: constants and the four projections.
  if (cons.forbid_degenerate_ops) {
    for (std::uint8_t table : {0b0000, 0b1111, 0b1100, 0b0011, 0b1010, 0b0101}) {
      for (int i = 1; i <= r; ++i) {
        std::vector<int> clause;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const bool bit = (table >> (2 * a + b)) & 1u;
            clause.push_back(bit ? -vm.op(i, a, b) : vm.op(i, a, b));
          }
        f.add_clause(clause);
      }
    }
  }

  // (g) no dead gates.
  if (cons.symmetry_breaking) {
    for (int g = 1; g <= r; ++g) {
      const int t = n + g;
      std::vector<int> clause;
      for (int h = 0; h < m; ++h)
        clause.push_back(vm.output(h, t));
      for (int i = g + 1; i <= r; ++i) {
        const int refs = n + i - 1;
        for (int o = 1; o <= refs; ++o)
          if (o != t)
            clause.push_back(vm.select(i, std::min(o, t), std::max(o, t)));
      }
      f.add_clause(clause);
    }
  }

  // (h) canonical order. dead(g) is an extra variable after the layout.
  if (cons.canonical_order && r >= 1) {
    auto dead = [&](int g) { return vm.variable_count() + g; };
    f.variable_count += r;
    for (int g = 1; g <= r; ++g) {
      const int t = n + g;
      if (g < r)
        f.add_clause({-dead(g), dead(g + 1)});
      f.add_clause({-dead(g), vm.select(g, 1, 2)});
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          f.add_clause({-dead(g), a && b ? vm.op(g, a, b) : -vm.op(g, a, b)});
      std::vector<int> used = {dead(g)};
      for (int h = 0; h < m; ++h) {
        used.push_back(vm.output(h, t));
        f.add_clause({-dead(g), -vm.output(h, t)});
      }
      // Dead gates read inputs only, so any reader of a gate is live.
      for (int i = g + 1; i <= r; ++i) {
        const int refs = n + i - 1;
        for (int o = 1; o <= refs; ++o)
          if (o != t)
            used.push_back(vm.select(i, std::min(o, t), std::max(o, t)));
      }
      f.add_clause(used);
    }
    for (int i = 1; i < r; ++i) {
      const int refs = n + i - 1;
      for (int j = 1; j <= refs; ++j)
        for (int k = j + 1; k <= refs; ++k)
          for (int j2 = 1; j2 <= j; ++j2)
            for (int k2 = j2 + 1; k2 <= (j2 == j ? k - 1 : refs); ++k2)
              f.add_clause({dead(i + 1), -vm.select(i, j, k), -vm.select(i + 1, j2, k2)});
    }
  }

  return Encoding{std::move(f), std::move(vm)};
}

Circuit decode_model(const VarMap &vm, const std::vector<bool> &model) {
  if (static_cast<int>(model.size()) < vm.variable_count())
    throw std::invalid_argument("model has " + std::to_string(model.size()) + " values, need " +
                                std::to_string(vm.variable_count()));
  auto truth = [&](int var) { return static_cast<bool>(model[var - 1]); };
  const int n = vm.input_count();
  const int r = vm.gate_count();
  Circuit c(n);
  for (int i = 1; i <= r; ++i) {
    std::optional<std::pair<int, int>> chosen;
    const int refs = n + i - 1;
    for (int j = 1; j <= refs; ++j)
      for (int k = j + 1; k <= refs; ++k)
        if (truth(vm.select(i, j, k))) {
          if (chosen)
            throw DecodeError(DecodeError::Kind::ExactlyOne,
                              "gate g" + std::to_string(i) + " selects more than one operand pair");
          chosen = std::make_pair(j, k);
        }
    if (!chosen)
      throw DecodeError(DecodeError::Kind::ExactlyOne,
                        "gate g" + std::to_string(i) + " selects no operand pair");
    std::uint8_t table = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (truth(vm.op(i, a, b)))
          table |= static_cast<std::uint8_t>(1u << (2 * a + b));
    c.add_gate(GateOp(table), vm.ref_of(chosen->first), vm.ref_of(chosen->second));
  }
  const auto &labels = vm.spec().labels();
  for (int h = 0; h < vm.output_count(); ++h) {
    std::optional<int> chosen;
    for (int t = 1; t <= n + r; ++t)
      if (truth(vm.output(h, t))) {
        if (chosen)
          throw DecodeError(DecodeError::Kind::ExactlyOne,
                            "output " + std::to_string(h) + " selects more than one source");
        chosen = t;
      }
    if (!chosen)
      throw DecodeError(DecodeError::Kind::ExactlyOne,
                        "output " + std::to_string(h) + " selects no source");
    c.add_output(labels[h], vm.ref_of(*chosen));
  }
  if (auto violations = validate(c); !violations.empty())
    throw DecodeError(DecodeError::Kind::Verification,
                      "decoded circuit is invalid: " + violations.front().message);
  if (auto eq = equivalent(c, vm.spec()); !eq.ok())
    throw DecodeError(DecodeError::Kind::Verification,
                      "decoded circuit disagrees with the target function on input " +
                          std::to_string(eq.counterexample->assignment.index()));
  return c;
}

} // namespace circsat
