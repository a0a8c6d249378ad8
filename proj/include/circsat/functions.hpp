#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circsat/spec.hpp"

namespace circsat {

/// Binary representation of x1 + ... + xn, w0 least significant.
FunctionSpec family_sum(int n);
/// [x1 + ... + xn = r (mod modulus)].
FunctionSpec family_mod(int n, int modulus, int r);
/// [x1 + ... + xn >= k].
FunctionSpec family_thr(int n, int k);

/// Number of output bits of family_sum(n).
int sum_width(int n);

/// Two-bit remainder code used by the mod-3 blocks: 0 -> (0,0), 1 -> (0,1),
/// 2 -> (1,0) or (1,1). Pairs are (r0, r1).
std::vector<std::pair<bool, bool>> mod3_encode(int rem);
/// Inverse of mod3_encode.
int mod3_decode(bool r0, bool r1);

/// Blocks of the mod-3 chain. IN_k reads k fresh bits; MID_3 and OUT_l^r read
/// (r0, r1) followed by their fresh bits.
struct Mod3Block {
  enum class Kind { In, Mid, Out };
  Kind kind = Kind::In;
  /// Number of fresh bits consumed.
  int width = 2;
  /// Target remainder, OUT blocks only.
  int r = 0;

  static Mod3Block in(int k) { return {Kind::In, k, 0}; }
  static Mod3Block mid() { return {Kind::Mid, 3, 0}; }
  static Mod3Block out(int l, int r) { return {Kind::Out, l, r}; }

  /// "in_3", "mid_3", "out_2_r0".
  std::string name() const;
  static Mod3Block parse(std::string_view name);

  bool operator==(const Mod3Block &) const = default;
};

PartialSpec mod3_block_spec(const Mod3Block &block);

/// Inputs (u1..u5) = (x1^x2, x2, x3, x4, x4^x5); outputs (b0, a1, a1^b1)
/// with x1 + ... + x5 = b0 + 2(a1 + b1). a1 is free when a1 + b1 = 1.
PartialSpec mdfa_spec();

/// One hex string per output; bit j of the number is the value at input
/// index j. Each string must have exactly max(1, 2^n / 4) digits.
FunctionSpec spec_from_hex(int n, int m, const std::vector<std::string> &hex);

/// Parses "sum:N", "mod:N:M:R", "thr:N:K" or "tt:N:M:HEX[,HEX...]".
/// Throws std::invalid_argument on malformed input.
FunctionSpec parse_function(std::string_view text);

} // namespace circsat
