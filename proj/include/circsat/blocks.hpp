#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circsat/circuit.hpp"
#include "circsat/functions.hpp"

namespace circsat {

/// Stored circuits, each verified against its target function when loaded.
struct BlockLibrary {
  Circuit half_adder;  // SUM2, 2 gates
  Circuit full_adder;  // SUM3, 5 gates
  Circuit sum5_11;     // SUM5, 11 gates
  Circuit mdfa;        // mdfa_spec(), 8 gates
  /// Mod-3 chain blocks keyed by Mod3Block::name().
  std::map<std::string, Circuit> mod3_blocks;
  /// Optimal MOD_n^{3,r} for the plan's corner cases, keyed by (n, r).
  std::map<std::pair<int, int>, Circuit> mod3_corners;

  const Circuit &mod3_block(const Mod3Block &block) const;
};

/// Expected gate counts of the stored circuits, by file name.
const std::map<std::string, int> &block_sizes();

/// Loads and verifies the embedded block data once; throws std::runtime_error
/// if any block is missing, malformed, the wrong size or incorrect.
const BlockLibrary &block_library();

/// The function each stored block must compute, by file name.
PartialSpec block_spec(const std::string &name);

/// Two-bit sum block used by build_mod4: sum5_11 without g5 and w2. Outputs
/// (w0, w1) with w0 + 2 w1 = x1 + ... + x5 (mod 4).
Circuit mod4_block();

/// Weight-bucket adder construction: full adders while a weight has three
/// bits, then a half or full adder per weight to leave one bit.
Circuit build_sum_adders(int n);

/// SUM_n from layers of MDFA blocks over XOR-encoded input pairs.
Circuit build_sum_mdfa(int n);

struct Mod3Plan {
  int k = 0;
  int mid_count = 0;
  int l = 0;
  int expected_size = 0;
};

/// (k, mid_count, l) for MOD_n^{3,r}; nullopt for the corner cases
/// (3,0), (3,2), (4,2) which use stored circuits.
std::optional<Mod3Plan> mod3_plan(int n, int r);
/// 3n - 5 - [(n + r) = 0 mod 3].
int mod3_size_formula(int n, int r);
Circuit build_mod3(int n, int r);

/// Chains two-bit sum blocks on a carry, XORs their weight-2 bits and
/// compares the result with r.
Circuit build_mod4(int n, int r);

/// 3n - 5 gates: a bubble pass for the maximum, OR of the minima.
Circuit build_thr2_bubble(int n);
/// Row/column OR grid with recursive THR2 on rows and columns.
Circuit build_thr2_grid(int n);
/// Size the recursive THR2 construction uses for n inputs.
int thr2_best_size(int n);

/// THR_n^k for k >= 4 via MDFA layers and the pair-threshold block.
Circuit build_thr(int n, int k);

/// size(SUM_k) / (k - ceil(log2(k + 1))): the per-input cost of building
/// SUM_n from SUM_k blocks. nullopt when the denominator is zero.
std::optional<double> sum_block_rate(int k, int size_k);

struct RateChoice {
  int k = 0;
  double rate = 0;
};
/// Best rate over (k, size) pairs.
RateChoice best_sum_block_rate(const std::vector<std::pair<int, int>> &sizes);

} // namespace circsat
