#include "circsat/truth_table.hpp"

#include <bit>
#include <stdexcept>

namespace circsat {

namespace {
constexpr std::uint64_t kVarPatterns[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};
}

TruthTable::TruthTable(int num_vars, bool fill) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > 30)
    throw std::invalid_argument("truth table variable count out of range");
  const std::uint64_t bits = num_bits();
  words_.assign((bits + 63) / 64, fill ? ~std::uint64_t{0} : 0);
  trim();
}

std::uint64_t TruthTable::word_mask() const {
  if (num_vars_ >= 6)
    return ~std::uint64_t{0};
  return (std::uint64_t{1} << (std::uint64_t{1} << num_vars_)) - 1;
}

void TruthTable::trim() {
  if (!words_.empty())
    words_.back() &= word_mask();
}

std::uint64_t TruthTable::count() const {
  std::uint64_t total = 0;
  for (auto w : words_)
    total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool TruthTable::none() const {
  for (auto w : words_)
    if (w != 0)
      return false;
  return true;
}

std::uint64_t variable_word(int var, std::uint64_t block) {
  if (var < 6)
    return kVarPatterns[var];
  return ((block >> (var - 6)) & 1u) ? ~std::uint64_t{0} : 0;
}

} // namespace circsat
