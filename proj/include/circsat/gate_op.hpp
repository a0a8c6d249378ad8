#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace circsat {

/// A binary Boolean operation stored as its 4-entry table.
///
/// Bit (2a + b) of the table is the output on operands (a, b), so the textual
/// form lists the outputs on (0,0), (0,1), (1,0), (1,1) in that order:
/// AND is "0001", XOR is "0110", GT (a and not b) is "0010".
class GateOp {
public:
  constexpr GateOp() = default;
  constexpr explicit GateOp(std::uint8_t table) : table_(table & 0xFu) {}

  /// Parses an alias (AND, OR, XOR, NAND, NOR, XNOR, GT, LT, GE, LE) or a
  /// 4-character table such as "0110".
  static std::optional<GateOp> parse(std::string_view text);

  constexpr std::uint8_t table() const { return table_; }

  constexpr bool apply(bool a, bool b) const {
    return (table_ >> ((a ? 2 : 0) + (b ? 1 : 0))) & 1u;
  }

  /// Bit-parallel application over 64 assignments.
  constexpr std::uint64_t apply(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t r = 0;
    if (table_ & 1u) r |= ~a & ~b;
    if (table_ & 2u) r |= ~a & b;
    if (table_ & 4u) r |= a & ~b;
    if (table_ & 8u) r |= a & b;
    return r;
  }

  /// Table string, "0110" for XOR.
  std::string bits() const;
  /// Alias when one exists, otherwise the table string.
  std::string name() const;

  /// Operation with the operands swapped: t'(a,b) = t(b,a).
  constexpr GateOp transposed() const {
    return GateOp(static_cast<std::uint8_t>((table_ & 0b1001u) | ((table_ & 2u) << 1) |
                                            ((table_ & 4u) >> 1)));
  }
  /// t'(a,b) = t(a ^ neg_left, b ^ neg_right).
  constexpr GateOp with_negated_operands(bool neg_left, bool neg_right) const {
    std::uint8_t out = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (apply((a != 0) != neg_left, (b != 0) != neg_right))
          out |= static_cast<std::uint8_t>(1u << (2 * a + b));
    return GateOp(out);
  }
  constexpr GateOp complemented() const { return GateOp(static_cast<std::uint8_t>(~table_)); }

  constexpr bool is_constant() const { return table_ == 0 || table_ == 0xF; }
  constexpr bool depends_on_left() const {
    return apply(false, false) != apply(true, false) || apply(false, true) != apply(true, true);
  }
  constexpr bool depends_on_right() const {
    return apply(false, false) != apply(false, true) || apply(true, false) != apply(true, true);
  }
  /// Constant or a function of a single operand.
  constexpr bool is_degenerate() const { return !(depends_on_left() && depends_on_right()); }

  constexpr bool operator==(const GateOp &) const = default;

  static constexpr GateOp AND() { return GateOp(0b1000); }
  static constexpr GateOp OR() { return GateOp(0b1110); }
  static constexpr GateOp XOR() { return GateOp(0b0110); }
  static constexpr GateOp NAND() { return GateOp(0b0111); }
  static constexpr GateOp NOR() { return GateOp(0b0001); }
  static constexpr GateOp XNOR() { return GateOp(0b1001); }
  static constexpr GateOp GT() { return GateOp(0b0100); }
  static constexpr GateOp LT() { return GateOp(0b0010); }
  static constexpr GateOp GE() { return GateOp(0b1101); }
  static constexpr GateOp LE() { return GateOp(0b1011); }

private:
  std::uint8_t table_ = 0;
};

} // namespace circsat
