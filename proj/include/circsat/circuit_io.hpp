#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "circsat/circuit.hpp"

namespace circsat {

/// Syntax or semantic error in a circuit file; line() is 1-based, 0 when the
/// problem is not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string &message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Reads the line-based format:
///
///   INPUTS 2
///   GATE g1 = XOR(x1, x2)
///   GATE g2 = AND(x1, x2)
///   OUTPUTS w0:g1 w1:g2
///
/// '#' starts a comment. Operations are aliases or 4-bit tables.
Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit &c);

Circuit read_circuit_file(const std::filesystem::path &path);
void write_circuit_file(const std::filesystem::path &path, const Circuit &c);

/// Graphviz digraph: one node per input and gate, one edge per operand,
/// output labels attached to the node they read.
std::string export_dot(const Circuit &c);

} // namespace circsat
