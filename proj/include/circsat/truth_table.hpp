#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace circsat {

/// Dense bit vector over all 2^n assignments of n variables.
/// Bit j holds the value at the assignment whose index is j, where x1 is the
/// least-significant index bit. Unused high bits of the last word stay zero.
class TruthTable {
public:
  TruthTable() = default;
  explicit TruthTable(int num_vars, bool fill = false);

  int num_vars() const { return num_vars_; }
  std::uint64_t num_bits() const { return std::uint64_t{1} << num_vars_; }

  bool get(std::uint64_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void set(std::uint64_t index, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (index & 63);
    if (value)
      words_[index >> 6] |= mask;
    else
      words_[index >> 6] &= ~mask;
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  /// Mask of valid bits in a word; all-ones unless num_vars < 6.
  std::uint64_t word_mask() const;
  /// Clears padding bits after direct word writes.
  void trim();

  std::uint64_t count() const;
  bool none() const;

  bool operator==(const TruthTable &) const = default;

private:
  int num_vars_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Word of simulation patterns for variable `var` (0-based) inside block
/// `block` of 64 consecutive assignments.
std::uint64_t variable_word(int var, std::uint64_t block);

} // namespace circsat
