#include "circsat/improver.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "circsat/synthesis.hpp"

namespace circsat {

namespace {

// Gates are adjacent when one reads the other or both read the same ref.
std::vector<std::vector<int>> gate_neighbors(const Circuit &c) {
  std::vector<std::set<int>> adj(c.size() + 1);
  std::map<Ref, std::vector<int>> readers;
  for (int g = 1; g <= c.size(); ++g)
    for (Ref r : {c.gate(g).left, c.gate(g).right}) {
      if (r.is_gate()) {
        adj[g].insert(static_cast<int>(r.index));
        adj[r.index].insert(g);
      }
      for (int other : readers[r])
        if (other != g) {
          adj[g].insert(other);
          adj[other].insert(g);
        }
      readers[r].push_back(g);
    }
  std::vector<std::vector<int>> out(adj.size());
  for (std::size_t g = 0; g < adj.size(); ++g)
    out[g].assign(adj[g].begin(), adj[g].end());
  return out;
}

// Enumerates connected vertex sets containing `root` as their smallest
// element, each once.
void extend(const std::vector<std::vector<int>> &adj, int root, int max_size,
            std::vector<int> &sub, std::vector<int> &closed,
            std::vector<int> ext, std::vector<std::vector<int>> &out) {
  out.push_back(sub);
  if (static_cast<int>(sub.size()) == max_size)
    return;
  while (!ext.empty()) {
    const int w = ext.back();
    ext.pop_back();
    std::vector<int> next = ext;
    std::vector<int> newly_closed;
    for (int u : adj[w])
      if (u > root && !closed[u]) {
        next.push_back(u);
        newly_closed.push_back(u);
      }
    for (int u : newly_closed)
      closed[u] = 1;
    sub.push_back(w);
    extend(adj, root, max_size, sub, closed, next, out);
    sub.pop_back();
    for (int u : newly_closed)
      closed[u] = 0;
  }
}

SolverConfig probe_config(const ImproveOptions &opts) {
  SolverConfig config = opts.solver;
  config.time_limit = opts.sat_timeout;
  return config;
}

} // namespace

bool is_convex(const Circuit &c, const std::vector<int> &gates) {
  if (gates.empty())
    return true;
  std::vector<char> in_set(c.size() + 1), below(c.size() + 1);
  for (int g : gates)
    in_set.at(g) = 1;
  const auto [lo, hi] = std::minmax_element(gates.begin(), gates.end());
  // below[g]: g is outside the set and reachable from it.
  for (int g = *lo + 1; g <= *hi; ++g) {
    bool reached = false, from_outside_path = false;
    for (Ref r : {c.gate(g).left, c.gate(g).right}) {
      if (!r.is_gate())
        continue;
      reached |= in_set[r.index] != 0;
      from_outside_path |= below[r.index] != 0;
    }
    if (in_set[g]) {
      if (from_outside_path)
        return false;
    } else {
      below[g] = reached || from_outside_path;
    }
  }
  return true;
}

Cut make_cut(const Circuit &c, std::vector<int> gates) {
  std::sort(gates.begin(), gates.end());
  gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
  Cut cut;
  cut.gates = gates;
  std::vector<char> in_set(c.size() + 1);
  for (int g : gates) {
    if (g < 1 || g > c.size())
      throw std::invalid_argument("gate index out of range");
    in_set[g] = 1;
  }
  std::set<Ref> inputs;
  for (int g : gates)
    for (Ref r : {c.gate(g).left, c.gate(g).right})
      if (!(r.is_gate() && in_set[r.index]))
        inputs.insert(r);
  cut.boundary_inputs.assign(inputs.begin(), inputs.end());
  std::set<int> outputs;
  for (int g = 1; g <= c.size(); ++g) {
    if (in_set[g])
      continue;
    for (Ref r : {c.gate(g).left, c.gate(g).right})
      if (r.is_gate() && in_set[r.index])
        outputs.insert(static_cast<int>(r.index));
  }
  for (const Output &o : c.outputs())
    if (o.ref.is_gate() && in_set[o.ref.index])
      outputs.insert(static_cast<int>(o.ref.index));
  cut.boundary_outputs.assign(outputs.begin(), outputs.end());
  return cut;
}

std::vector<Cut> enumerate_cuts(const Circuit &c, const ImproveOptions &opts) {
  const auto adj = gate_neighbors(c);
  std::vector<std::vector<int>> sets;
  std::vector<int> closed(c.size() + 1);
  for (int v = 1; v <= c.size(); ++v) {
    std::vector<int> sub = {v};
    closed[v] = 1;
    std::vector<int> ext;
    for (int u : adj[v])
      if (u > v) {
        ext.push_back(u);
        closed[u] = 1;
      }
    extend(adj, v, opts.max_gates, sub, closed, ext, sets);
    for (int u : adj[v])
      closed[u] = 0;
    closed[v] = 0;
  }
  for (auto &s : sets)
    std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end());
  std::vector<Cut> cuts;
  for (auto &s : sets) {
    if (!is_convex(c, s))
      continue;
    Cut cut = make_cut(c, std::move(s));
    if (static_cast<int>(cut.boundary_inputs.size()) > opts.max_inputs ||
        cut.boundary_outputs.empty())
      continue;
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

Circuit extract_cut(const Circuit &c, const Cut &cut) {
  Circuit out(static_cast<int>(cut.boundary_inputs.size()));
  std::map<Ref, Ref> map;
  for (std::size_t i = 0; i < cut.boundary_inputs.size(); ++i)
    map[cut.boundary_inputs[i]] = Ref::input(static_cast<std::uint32_t>(i + 1));
  for (int g : cut.gates) {
    const Gate &gate = c.gate(g);
    map[Ref::gate(g)] = out.add_gate(gate.op, map.at(gate.left), map.at(gate.right));
  }
  for (std::size_t h = 0; h < cut.boundary_outputs.size(); ++h)
    out.add_output("o" + std::to_string(h + 1), map.at(Ref::gate(cut.boundary_outputs[h])));
  return out;
}

PartialSpec cut_local_spec(const Circuit &c, const Cut &cut, DcMode mode) {
  const Circuit local = extract_cut(c, cut);
  if (mode == DcMode::Off)
    return PartialSpec(truth_table(local));

  if (c.input_count() > kExhaustiveLimit)
    throw std::invalid_argument("global don't-cares need at most " +
                                std::to_string(kExhaustiveLimit) + " inputs");
  const int k = local.input_count();
  const int m = local.output_count();
  PartialSpec spec(k, m);
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << k); ++p)
    spec.drop(p);
  const int n = c.input_count();
  const int bits = n >= 6 ? 64 : 1 << n;
  std::vector<std::uint64_t> in_words(k), out_words(m);
  simulate(c, [&](std::uint64_t block, const std::vector<std::uint64_t> &gates,
                  const std::vector<std::uint64_t> &) {
    auto word = [&](Ref r) -> std::uint64_t {
      switch (r.kind) {
      case RefKind::Constant:
        return r.index ? ~std::uint64_t{0} : 0;
      case RefKind::Input:
        return variable_word(static_cast<int>(r.index) - 1, block);
      case RefKind::Gate:
        return gates[r.index - 1];
      }
      return 0;
    };
    for (int i = 0; i < k; ++i)
      in_words[i] = word(cut.boundary_inputs[i]);
    for (int h = 0; h < m; ++h)
      out_words[h] = gates[cut.boundary_outputs[h] - 1];
    for (int b = 0; b < bits; ++b) {
      std::uint64_t p = 0;
      for (int i = 0; i < k; ++i)
        p |= ((in_words[i] >> b) & 1) << i;
      if (spec.is_care(p))
        continue;
      for (int h = 0; h < m; ++h)
        spec.set(h, p, (out_words[h] >> b) & 1 ? Tri::One : Tri::Zero);
    }
  });
  std::vector<std::string> labels;
  for (const Output &o : local.outputs())
    labels.push_back(o.label);
  spec.set_labels(labels);
  return spec;
}

TryResult try_improve_cut(const Circuit &c, const Cut &cut, const PartialSpec &local,
                          const ImproveOptions &opts) {
  TryResult result;
  const int target = static_cast<int>(cut.gates.size()) - 1;
  if (target < 0)
    return result;
  SynthesisConstraints constraints;
  constraints.forbid_degenerate_ops = false;
  const FindResult found = find_circuit(local, target, constraints, probe_config(opts));
  result.solver_seconds = found.solver_seconds;
  switch (found.status) {
  case FindStatus::Found:
    result.status = TryResult::Status::Replacement;
    result.fragment = found.circuit;
    break;
  case FindStatus::Unsat:
    result.status = TryResult::Status::NoImprovement;
    break;
  case FindStatus::Unknown:
    result.status = TryResult::Status::Unknown;
    break;
  }
  (void)c;
  return result;
}

TryResult try_improve_cut(const Circuit &c, const Cut &cut, const ImproveOptions &opts) {
  const DcMode mode = c.input_count() > 16 ? DcMode::Off : opts.dc_mode;
  return try_improve_cut(c, cut, cut_local_spec(c, cut, mode), opts);
}

Circuit splice(const Circuit &c, const Cut &cut, const Circuit &fragment) {
  if (fragment.input_count() != static_cast<int>(cut.boundary_inputs.size()) ||
      fragment.output_count() != static_cast<int>(cut.boundary_outputs.size()))
    throw std::invalid_argument("fragment arity does not match the cut");
  std::vector<char> in_cut(c.size() + 1);
  for (int g : cut.gates)
    in_cut.at(g) = 1;
  std::map<int, int> output_slot;
  for (std::size_t h = 0; h < cut.boundary_outputs.size(); ++h)
    output_slot[cut.boundary_outputs[h]] = static_cast<int>(h);

  Circuit out(c.input_count());
  // Host gates are nodes 1..size, fragment gates size+1..; 0 = not emitted.
  const int host = c.size();
  std::vector<Ref> emitted(host + fragment.size() + 1, Ref::constant(false));
  std::vector<char> state(host + fragment.size() + 1);  // 0 new, 1 open, 2 done

  std::function<Ref(Ref)> host_ref;
  std::function<Ref(Ref)> fragment_ref;
  auto emit = [&](int node, const Gate &gate, auto &&operand) -> Ref {
    if (state[node] == 2)
      return emitted[node];
    if (state[node] == 1)
      throw std::logic_error("splice produced a cycle");
    state[node] = 1;
    const Ref l = operand(gate.left);
    const Ref r = operand(gate.right);
    emitted[node] = out.add_gate(gate.op, l, r);
    state[node] = 2;
    return emitted[node];
  };
  fragment_ref = [&](Ref r) -> Ref {
    if (r.is_input())
      return host_ref(cut.boundary_inputs.at(r.index - 1));
    if (r.is_constant())
      return r;
    return emit(host + static_cast<int>(r.index), fragment.gate(r.index), fragment_ref);
  };
  host_ref = [&](Ref r) -> Ref {
    if (!r.is_gate())
      return r;
    const int g = static_cast<int>(r.index);
    if (in_cut[g]) {
      const auto it = output_slot.find(g);
      if (it == output_slot.end())
        throw std::logic_error("cut gate read outside the cut is not a boundary output");
      return fragment_ref(fragment.outputs()[it->second].ref);
    }
    return emit(g, c.gate(g), host_ref);
  };

  for (int g = 1; g <= host; ++g)
    if (!in_cut[g])
      host_ref(Ref::gate(g));
  for (const Output &o : c.outputs())
    out.add_output(o.label, host_ref(o.ref));
  Circuit result = normalize(out);
  if (Circuit folded = simplify(result); folded.size() < result.size())
    result = std::move(folded);
  require_valid(result);
  if (c.input_count() <= 20 && truth_table(result) != truth_table(c))
    throw std::logic_error("spliced circuit is not equivalent to the original");
  return result;
}

std::pair<Circuit, ImproveReport> improve_circuit(const Circuit &c, const ImproveOptions &opts,
                                                  const ImproveCallback &on_accept) {
  if (opts.max_gates < 2)
    throw std::invalid_argument("max_gates must be at least 2");
  require_valid(c);
  const DcMode mode = c.input_count() > 16 ? DcMode::Off : opts.dc_mode;
  ImproveReport report;
  report.initial_size = c.size();
  Circuit current = c;
  const int jobs = std::max(1, opts.jobs);

  while (opts.pass_budget == 0 || report.passes < opts.pass_budget) {
    if (opts.solver.stop && opts.solver.stop->load())
      break;
    ++report.passes;
    const std::vector<Cut> cuts = enumerate_cuts(current, opts);

    struct Outcome {
      TryResult result;
      std::optional<Circuit> spliced;
    };
    auto probe = [&](const Cut &cut) {
      Outcome o;
      o.result = try_improve_cut(current, cut, cut_local_spec(current, cut, mode), opts);
      if (o.result.status == TryResult::Status::Replacement) {
        try {
          o.spliced = splice(current, cut, *o.result.fragment);
        } catch (const std::logic_error &) {
          o.result.status = TryResult::Status::NoImprovement;
        }
        if (o.spliced && o.spliced->size() >= current.size())
          o.spliced.reset();
      }
      return o;
    };

    std::optional<std::size_t> winner;
    std::optional<Outcome> winning;
    for (std::size_t start = 0; start < cuts.size() && !winner; start += jobs) {
      const std::size_t end = std::min(cuts.size(), start + jobs);
      std::vector<Outcome> outcomes(end - start);
      if (jobs == 1) {
        outcomes[0] = probe(cuts[start]);
      } else {
        std::vector<std::thread> threads;
        for (std::size_t i = start; i < end; ++i)
          threads.emplace_back([&, i] { outcomes[i - start] = probe(cuts[i]); });
        for (auto &t : threads)
          t.join();
      }
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        ++report.probes;
        if (outcomes[i].result.status == TryResult::Status::Unknown)
          ++report.unknown_probes;
        if (!winner && outcomes[i].spliced) {
          winner = start + i;
          winning = std::move(outcomes[i]);
        }
      }
      if (opts.solver.stop && opts.solver.stop->load())
        break;
    }
    if (!winner)
      break;
    AcceptedReplacement accepted;
    accepted.cut_gates = cuts[*winner].gates;
    accepted.old_size = current.size();
    accepted.new_size = winning->spliced->size();
    accepted.solver_seconds = winning->result.solver_seconds;
    current = std::move(*winning->spliced);
    report.accepted.push_back(accepted);
    if (on_accept)
      on_accept(accepted, current);
  }
  report.final_size = current.size();
  return {current, report};
}

} // namespace circsat
