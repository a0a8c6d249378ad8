#include "circsat/gate_op.hpp"

#include <array>
#include <utility>

namespace circsat {

namespace {
constexpr std::array<std::pair<std::string_view, GateOp>, 10> kAliases = {{
    {"AND", GateOp::AND()},
    {"OR", GateOp::OR()},
    {"XOR", GateOp::XOR()},
    {"NAND", GateOp::NAND()},
    {"NOR", GateOp::NOR()},
    {"XNOR", GateOp::XNOR()},
    {"GT", GateOp::GT()},
    {"LT", GateOp::LT()},
    {"GE", GateOp::GE()},
    {"LE", GateOp::LE()},
}};
} // namespace

std::optional<GateOp> GateOp::parse(std::string_view text) {
  for (const auto &[name, op] : kAliases)
    if (text == name)
      return op;
  if (text.size() != 4)
    return std::nullopt;
  std::uint8_t table = 0;
  for (int i = 0; i < 4; ++i) {
    if (text[i] == '1')
      table |= static_cast<std::uint8_t>(1u << i);
    else if (text[i] != '0')
      return std::nullopt;
  }
  return GateOp(table);
}

std::string GateOp::bits() const {
  std::string out(4, '0');
  for (int i = 0; i < 4; ++i)
    if ((table_ >> i) & 1u)
      out[i] = '1';
  return out;
}

std::string GateOp::name() const {
  for (const auto &[name, op] : kAliases)
    if (op == *this)
      return std::string(name);
  return bits();
}

} // namespace circsat
