#include "circsat/blocks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>

#include "circsat/circuit_builder.hpp"
#include "circsat/circuit_io.hpp"

namespace circsat {

namespace detail {
struct EmbeddedFile {
  const char *name;
  const char *text;
};
extern const EmbeddedFile kBlockFiles[];
extern const std::size_t kBlockFileCount;
} // namespace detail

namespace {

const char *const kCornerNames[] = {"mod3_n3_r0", "mod3_n3_r2", "mod3_n4_r2"};

std::pair<int, int> corner_key(const std::string &name) {
  // "mod3_n<N>_r<R>"
  return {name[6] - '0', name[9] - '0'};
}

BlockLibrary load_library() {
  std::map<std::string, Circuit> files;
  for (std::size_t i = 0; i < detail::kBlockFileCount; ++i) {
    const auto &f = detail::kBlockFiles[i];
    try {
      files.emplace(f.name, parse_circuit(f.text));
    } catch (const ParseError &e) {
      throw std::runtime_error("block " + std::string(f.name) + ": " + e.what());
    }
  }
  for (const auto &[name, size] : block_sizes()) {
    auto it = files.find(name);
    if (it == files.end())
      throw std::runtime_error("block " + name + " is missing");
    const Circuit &c = it->second;
    if (c.size() != size)
      throw std::runtime_error("block " + name + " has " + std::to_string(c.size()) +
                               " gates, expected " + std::to_string(size));
    const PartialSpec spec = block_spec(name);
    if (c.input_count() != spec.input_count() || c.output_count() != spec.output_count() ||
        !validate(c).empty() || !equivalent(c, spec).ok())
      throw std::runtime_error("block " + name + " does not compute its target function");
  }
  BlockLibrary lib;
  lib.half_adder = files.at("half_adder");
  lib.full_adder = files.at("full_adder");
  lib.sum5_11 = files.at("sum5_11");
  lib.mdfa = files.at("mdfa");
  for (const char *name : {"in_2", "in_3", "in_4", "mid_3", "out_2_r0", "out_1_r1", "out_3_r2"})
    lib.mod3_blocks.emplace(name, files.at(name));
  for (const char *name : kCornerNames)
    lib.mod3_corners.emplace(corner_key(name), files.at(name));
  return lib;
}

// A pair of bits (y, z) of equal weight carried as (y, y ^ z).
struct Pair {
  Ref y;
  Ref yz;
};

std::vector<Ref> outputs_of(CircuitBuilder &b, const Circuit &block, std::vector<Ref> in) {
  return b.instantiate(block, in);
}

struct LevelResult {
  Ref bit;
  Ref carry;
  std::vector<Pair> pairs;
};

// Adds carry + sum of pairs at one weight: returns the bit of this weight and
// the carry and pairs of the next.
LevelResult mdfa_level(CircuitBuilder &b, Ref carry, const std::vector<Pair> &pairs) {
  const Circuit &mdfa = block_library().mdfa;
  LevelResult out;
  std::size_t i = 0;
  for (; i + 1 < pairs.size(); i += 2) {
    const auto o = outputs_of(b, mdfa,
                              {pairs[i].yz, pairs[i].y, carry, pairs[i + 1].y, pairs[i + 1].yz});
    carry = o[0];
    out.pairs.push_back({o[1], o[2]});
  }
  out.carry = CircuitBuilder::constant(false);
  if (i == pairs.size()) {
    out.bit = carry;
    return out;
  }
  const Ref p = pairs[i].y, s = pairs[i].yz;
  if (carry.is_constant()) {
    out.bit = s;
    out.carry = b.add(GateOp::GT(), p, s);
  } else if (p == s) {
    out.bit = b.add(GateOp::XOR(), carry, p);
    out.carry = b.add(GateOp::AND(), carry, p);
  } else {
    out.bit = b.add(GateOp::XOR(), carry, s);
    const Ref t = b.add(GateOp::XOR(), carry, p);
    out.carry = b.add(GateOp::XOR(), b.add(GateOp::AND(), t, s), p);
  }
  return out;
}

// x1 as the carry, the remaining inputs paired up; an odd one out pairs with 0.
std::vector<Pair> input_pairs(CircuitBuilder &b, int n) {
  std::vector<Pair> pairs;
  for (int i = 2; i <= n; i += 2) {
    const Ref y = CircuitBuilder::input(i);
    const Ref z = i + 1 <= n ? CircuitBuilder::input(i + 1) : CircuitBuilder::constant(false);
    pairs.push_back({y, z.is_constant() ? y : b.add(GateOp::XOR(), y, z)});
  }
  return pairs;
}

void check(bool ok, const std::string &message) {
  if (!ok)
    throw std::invalid_argument(message);
}

Ref thr2_refs(CircuitBuilder &b, const std::vector<Ref> &x, bool top_grid);

Ref thr2_bubble_refs(CircuitBuilder &b, const std::vector<Ref> &x) {
  const std::size_t m = x.size();
  if (m < 2)
    return CircuitBuilder::constant(false);
  Ref max = x[0];
  std::optional<Ref> acc;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const Ref min = b.add(GateOp::AND(), max, x[i]);
    max = b.add(GateOp::OR(), max, x[i]);
    acc = acc ? b.add(GateOp::OR(), *acc, min) : min;
  }
  const Ref last = b.add(GateOp::AND(), max, x[m - 1]);
  return acc ? b.add(GateOp::OR(), *acc, last) : last;
}

std::pair<int, int> grid_shape(int n) {
  int a = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while ((a + 1) * (a + 1) <= n)
    ++a;
  while (a * a > n)
    --a;
  return {a, (n + a - 1) / a};
}

int grid_size(int n) {
  const auto [a, cols] = grid_shape(n);
  return 2 * n - a - cols + thr2_best_size(a) + thr2_best_size(cols) + 1;
}

Ref or_all(CircuitBuilder &b, const std::vector<Ref> &x) {
  if (x.empty())
    return CircuitBuilder::constant(false);
  Ref acc = x[0];
  for (std::size_t i = 1; i < x.size(); ++i)
    acc = b.add(GateOp::OR(), acc, x[i]);
  return acc;
}

Ref thr2_grid_refs(CircuitBuilder &b, const std::vector<Ref> &x) {
  const int n = static_cast<int>(x.size());
  const auto [a, cols] = grid_shape(n);
  std::vector<std::vector<Ref>> rows(a), columns(cols);
  for (int i = 0; i < n; ++i) {
    rows[i / cols].push_back(x[i]);
    columns[i % cols].push_back(x[i]);
  }
  std::vector<Ref> row_or, col_or;
  for (const auto &r : rows)
    row_or.push_back(or_all(b, r));
  for (const auto &c : columns)
    col_or.push_back(or_all(b, c));
  const Ref by_rows = thr2_refs(b, row_or, false);
  const Ref by_cols = thr2_refs(b, col_or, false);
  return b.add(GateOp::OR(), by_rows, by_cols);
}

Ref thr2_refs(CircuitBuilder &b, const std::vector<Ref> &x, bool top_grid) {
  const int n = static_cast<int>(x.size());
  if (top_grid)
    return thr2_grid_refs(b, x);
  if (n <= 4 || 3 * n - 5 <= grid_size(n))
    return thr2_bubble_refs(b, x);
  return thr2_grid_refs(b, x);
}

Circuit thr_power_of_two(int n, int t) {
  CircuitBuilder b(n);
  Ref carry = CircuitBuilder::input(1);
  std::vector<Pair> pairs = input_pairs(b, n);
  for (int level = 0; level < t - 1; ++level) {
    LevelResult next = mdfa_level(b, carry, pairs);
    carry = next.carry;
    pairs = std::move(next.pairs);
  }
  if (!carry.is_constant())
    pairs.push_back({carry, carry});
  std::vector<Ref> both, either;
  for (const Pair &p : pairs) {
    if (p.y != p.yz)
      both.push_back(b.add(GateOp::GT(), p.y, p.yz));
    either.push_back(p.yz);
  }
  if (either.size() >= 2)
    both.push_back(thr2_refs(b, either, false));
  b.add_output("y", both.empty() ? CircuitBuilder::constant(false) : or_all(b, both));
  return b.build();
}

} // namespace

const Circuit &BlockLibrary::mod3_block(const Mod3Block &block) const {
  auto it = mod3_blocks.find(block.name());
  if (it == mod3_blocks.end())
    throw std::invalid_argument("no stored block " + block.name());
  return it->second;
}

const std::map<std::string, int> &block_sizes() {
  static const std::map<std::string, int> sizes = {
      {"half_adder", 2}, {"full_adder", 5}, {"sum5_11", 11},   {"mdfa", 8},
      {"in_2", 2},       {"in_3", 5},       {"in_4", 7},       {"mid_3", 9},
      {"out_2_r0", 5},   {"out_1_r1", 2},   {"out_3_r2", 8},   {"mod3_n3_r0", 3},
      {"mod3_n3_r2", 4}, {"mod3_n4_r2", 6},
  };
  return sizes;
}

PartialSpec block_spec(const std::string &name) {
  if (name == "half_adder")
    return PartialSpec(family_sum(2));
  if (name == "full_adder")
    return PartialSpec(family_sum(3));
  if (name == "sum5_11")
    return PartialSpec(family_sum(5));
  if (name == "mdfa")
    return mdfa_spec();
  for (const char *corner : kCornerNames)
    if (name == corner) {
      const auto [n, r] = corner_key(name);
      return PartialSpec(family_mod(n, 3, r));
    }
  return mod3_block_spec(Mod3Block::parse(name));
}

const BlockLibrary &block_library() {
  static std::once_flag once;
  static std::optional<BlockLibrary> lib;
  std::call_once(once, [] { lib = load_library(); });
  return *lib;
}

Circuit mod4_block() {
  const Circuit &full = block_library().sum5_11;
  Circuit c(full.input_count());
  for (const Gate &g : full.gates())
    c.add_gate(g.op, g.left, g.right);
  c.add_output("w0", full.outputs()[0].ref);
  c.add_output("w1", full.outputs()[1].ref);
  return normalize(c);
}

Circuit build_sum_adders(int n) {
  check(n >= 2, "build_sum_adders needs n >= 2");
  const BlockLibrary &lib = block_library();
  CircuitBuilder b(n);
  std::vector<std::deque<Ref>> buckets(1);
  for (int i = 1; i <= n; ++i)
    buckets[0].push_back(CircuitBuilder::input(i));
  for (std::size_t w = 0; w < buckets.size(); ++w) {
    auto carry_out = [&](Ref r) {
      if (buckets.size() == w + 1)
        buckets.emplace_back();
      buckets[w + 1].push_back(r);
    };
    while (buckets[w].size() >= 3) {
      std::vector<Ref> in(buckets[w].begin(), buckets[w].begin() + 3);
      buckets[w].erase(buckets[w].begin(), buckets[w].begin() + 3);
      const auto o = outputs_of(b, lib.full_adder, in);
      buckets[w].push_front(o[0]);
      carry_out(o[1]);
    }
    if (buckets[w].size() == 2) {
      const auto o = outputs_of(b, lib.half_adder, {buckets[w][0], buckets[w][1]});
      buckets[w] = {o[0]};
      carry_out(o[1]);
    }
  }
  for (int w = 0; w < sum_width(n); ++w)
    b.add_output("w" + std::to_string(w),
                 w < static_cast<int>(buckets.size()) ? buckets[w].front()
                                                      : CircuitBuilder::constant(false));
  return b.build();
}

Circuit build_sum_mdfa(int n) {
  check(n >= 2, "build_sum_mdfa needs n >= 2");
  CircuitBuilder b(n);
  Ref carry = CircuitBuilder::input(1);
  std::vector<Pair> pairs = input_pairs(b, n);
  std::vector<Ref> bits;
  while (!pairs.empty() || !carry.is_constant()) {
    LevelResult next = mdfa_level(b, carry, pairs);
    bits.push_back(next.bit);
    carry = next.carry;
    pairs = std::move(next.pairs);
  }
  for (int w = 0; w < sum_width(n); ++w)
    b.add_output("w" + std::to_string(w), w < static_cast<int>(bits.size())
                                              ? bits[w]
                                              : CircuitBuilder::constant(false));
  return b.build();
}

std::optional<Mod3Plan> mod3_plan(int n, int r) {
  check(n >= 3 && r >= 0 && r <= 2, "mod3_plan needs n >= 3 and r in {0,1,2}");
  if ((n == 3 && r == 0) || (n == 3 && r == 2) || (n == 4 && r == 2))
    return std::nullopt;
  static const int kIn[] = {0, 0, 2, 5, 7};
  static const int kOut[] = {5, 2, 8};
  static const int kTail[] = {2, 1, 3};
  // Head width by (n mod 3, r); mid count follows from k + 3m + l = n.
  static const int kHead[3][3] = {{4, 2, 3}, {2, 3, 4}, {3, 4, 2}};
  Mod3Plan plan;
  plan.k = kHead[n % 3][r];
  plan.l = kTail[r];
  plan.mid_count = (n - plan.k - plan.l) / 3;
  plan.expected_size = kIn[plan.k] + 9 * plan.mid_count + kOut[r];
  return plan;
}

int mod3_size_formula(int n, int r) { return 3 * n - 5 - ((n + r) % 3 == 0 ? 1 : 0); }

Circuit build_mod3(int n, int r) {
  const std::optional<Mod3Plan> plan = mod3_plan(n, r);
  const BlockLibrary &lib = block_library();
  if (!plan)
    return lib.mod3_corners.at({n, r});
  CircuitBuilder b(n);
  int next = 1;
  auto fresh = [&](std::vector<Ref> &in, int count) {
    for (int i = 0; i < count; ++i)
      in.push_back(CircuitBuilder::input(next++));
  };
  std::vector<Ref> in;
  fresh(in, plan->k);
  std::vector<Ref> rem = outputs_of(b, lib.mod3_block(Mod3Block::in(plan->k)), in);
  for (int i = 0; i < plan->mid_count; ++i) {
    in = rem;
    fresh(in, 3);
    rem = outputs_of(b, lib.mod3_block(Mod3Block::mid()), in);
  }
  in = rem;
  fresh(in, plan->l);
  b.add_output("y", outputs_of(b, lib.mod3_block(Mod3Block::out(plan->l, r)), in)[0]);
  return b.build_exact();
}

Circuit build_mod4(int n, int r) {
  check(n >= 5 && r >= 0 && r <= 3, "build_mod4 needs n >= 5 and r in {0,1,2,3}");
  const Circuit block = mod4_block();
  const int blocks = (n - 1 + 3) / 4;
  CircuitBuilder b(n);
  auto input = [&](int i) {
    return i <= n ? CircuitBuilder::input(i) : CircuitBuilder::constant(false);
  };
  Ref w0 = input(1);
  std::optional<Ref> parity;
  for (int k = 0; k < blocks; ++k) {
    std::vector<Ref> in = {w0};
    for (int j = 0; j < 4; ++j)
      in.push_back(input(2 + 4 * k + j));
    const auto o = outputs_of(b, block, in);
    w0 = o[0];
    parity = parity ? b.add(GateOp::XOR(), *parity, o[1]) : o[1];
  }
  static const GateOp kCompare[] = {GateOp::NOR(), GateOp::GT(), GateOp::LT(), GateOp::AND()};
  b.add_output("y", b.add(kCompare[r], w0, *parity));
  return b.build();
}

Circuit build_thr2_bubble(int n) {
  check(n >= 2, "build_thr2_bubble needs n >= 2");
  CircuitBuilder b(n);
  std::vector<Ref> x;
  for (int i = 1; i <= n; ++i)
    x.push_back(CircuitBuilder::input(i));
  b.add_output("y", thr2_bubble_refs(b, x));
  return b.build_exact();
}

Circuit build_thr2_grid(int n) {
  check(n >= 2, "build_thr2_grid needs n >= 2");
  CircuitBuilder b(n);
  std::vector<Ref> x;
  for (int i = 1; i <= n; ++i)
    x.push_back(CircuitBuilder::input(i));
  b.add_output("y", thr2_refs(b, x, true));
  return b.build();
}

int thr2_best_size(int n) {
  if (n < 2)
    return 0;
  if (n <= 4)
    return 3 * n - 5;
  return std::min(3 * n - 5, grid_size(n));
}

Circuit build_thr(int n, int k) {
  check(k >= 4, "build_thr needs k >= 4");
  check(n >= k, "build_thr needs n >= k");
  int t = 0;
  while ((1 << t) < k)
    ++t;
  const int extra = (1 << t) - k;
  check(n + extra <= 30, "too many inputs");
  Circuit c = thr_power_of_two(n + extra, t);
  if (extra == 0)
    return c;
  std::map<int, bool> ones;
  for (int i = n + 1; i <= n + extra; ++i)
    ones[i] = true;
  return restrict(c, ones);
}

std::optional<double> sum_block_rate(int k, int size_k) {
  const int bits = std::bit_width(static_cast<unsigned>(k));  // ceil(log2(k + 1))
  if (k - bits <= 0)
    return std::nullopt;
  return static_cast<double>(size_k) / (k - bits);
}

RateChoice best_sum_block_rate(const std::vector<std::pair<int, int>> &sizes) {
  std::optional<RateChoice> best;
  for (const auto &[k, size] : sizes) {
    const auto rate = sum_block_rate(k, size);
    if (rate && (!best || *rate < best->rate))
      best = RateChoice{k, *rate};
  }
  if (!best)
    throw std::invalid_argument("no block size with a positive denominator");
  return *best;
}

} // namespace circsat
