#include "circsat/circuit_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace circsat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::optional<std::uint32_t> parse_index(std::string_view s) {
  std::uint32_t v = 0;
  if (s.empty())
    return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

std::optional<Ref> parse_ref(std::string_view s) {
  if (s == "CONST0")
    return Ref::constant(false);
  if (s == "CONST1")
    return Ref::constant(true);
  if (s.size() < 2 || (s[0] != 'x' && s[0] != 'g'))
    return std::nullopt;
  auto idx = parse_index(s.substr(1));
  if (!idx)
    return std::nullopt;
  return s[0] == 'x' ? Ref::input(*idx) : Ref::gate(*idx);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
      ++j;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class Parser {
public:
  Circuit run(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos)
        end = text.size();
      ++line_;
      std::string_view l = text.substr(pos, end - pos);
      if (auto hash = l.find('#'); hash != std::string_view::npos)
        l = l.substr(0, hash);
      l = trim(l);
      if (!l.empty())
        statement(l);
      pos = end + 1;
    }
    if (!circuit_)
      throw ParseError(0, "missing INPUTS line");
    if (!outputs_seen_)
      throw ParseError(0, "missing OUTPUTS line");
    return std::move(*circuit_);
  }

private:
  void statement(std::string_view l) {
    auto words = split_ws(l);
    const std::string_view head = words.front();
    if (head == "INPUTS") {
      if (circuit_)
        fail("repeated INPUTS line");
      if (words.size() != 2)
        fail("expected 'INPUTS <n>'");
      auto n = parse_index(words[1]);
      if (!n || *n > 1000000)
        fail("bad input count '" + std::string(words[1]) + "'");
      circuit_.emplace(static_cast<int>(*n));
    } else if (head == "GATE") {
      need_inputs();
      if (outputs_seen_)
        fail("GATE after OUTPUTS");
      gate(trim(l.substr(4)));
    } else if (head == "OUTPUTS") {
      need_inputs();
      if (outputs_seen_)
        fail("repeated OUTPUTS line");
      outputs_seen_ = true;
      for (std::size_t i = 1; i < words.size(); ++i)
        output(words[i]);
    } else {
      fail("unknown statement '" + std::string(head) + "'");
    }
  }

  void gate(std::string_view rest) {
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos)
      fail("expected 'GATE g<i> = OP(a, b)'");
    const auto name = trim(rest.substr(0, eq));
    const auto expected = circuit_->size() + 1;
    if (name != "g" + std::to_string(expected))
      fail("expected gate name g" + std::to_string(expected) + ", got '" + std::string(name) + "'");
    auto body = trim(rest.substr(eq + 1));
    const auto open = body.find('(');
    if (open == std::string_view::npos || body.back() != ')')
      fail("expected 'OP(a, b)'");
    const auto op_text = trim(body.substr(0, open));
    auto op = GateOp::parse(op_text);
    if (!op)
      fail("unknown operation '" + std::string(op_text) + "'");
    const auto args = body.substr(open + 1, body.size() - open - 2);
    const auto comma = args.find(',');
    if (comma == std::string_view::npos)
      fail("expected two operands");
    const Ref a = operand(trim(args.substr(0, comma)), expected);
    const Ref b = operand(trim(args.substr(comma + 1)), expected);
    if (a == b)
      fail("gate g" + std::to_string(expected) + " uses " + a.to_string() + " twice");
    circuit_->add_gate(*op, a, b);
  }

  Ref operand(std::string_view s, int gate_index) {
    auto r = parse_ref(s);
    if (!r)
      fail("bad operand '" + std::string(s) + "'");
    if (r->is_constant())
      fail("constant operand '" + std::string(s) + "'");
    check_ref(*r, gate_index - 1);
    return *r;
  }

  void check_ref(Ref r, int gate_limit) {
    if (r.is_input() && (r.index < 1 || r.index > static_cast<std::uint32_t>(circuit_->input_count())))
      fail("unknown ref " + r.to_string());
    if (r.is_gate() && (r.index < 1 || r.index > static_cast<std::uint32_t>(gate_limit)))
      fail("unknown ref " + r.to_string());
  }

  void output(std::string_view item) {
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
      fail("expected '<label>:<ref>', got '" + std::string(item) + "'");
    const std::string label(item.substr(0, colon));
    auto r = parse_ref(item.substr(colon + 1));
    if (!r)
      fail("bad output ref '" + std::string(item.substr(colon + 1)) + "'");
    check_ref(*r, circuit_->size());
    if (!labels_.insert(label).second)
      fail("duplicate label '" + label + "'");
    circuit_->add_output(label, *r);
  }

  void need_inputs() {
    if (!circuit_)
      fail("INPUTS must come first");
  }

  [[noreturn]] void fail(const std::string &message) { throw ParseError(line_, message); }

  int line_ = 0;
  std::optional<Circuit> circuit_;
  bool outputs_seen_ = false;
  std::set<std::string> labels_;
};

} // namespace

Circuit parse_circuit(std::string_view text) { return Parser().run(text); }

std::string serialize_circuit(const Circuit &c) {
  std::ostringstream out;
  out << "INPUTS " << c.input_count() << '\n';
  for (int i = 1; i <= c.size(); ++i) {
    const Gate &g = c.gate(i);
    out << "GATE g" << i << " = " << g.op.name() << '(' << g.left.to_string() << ", "
        << g.right.to_string() << ")\n";
  }
  out << "OUTPUTS";
  for (const Output &o : c.outputs())
    out << ' ' << o.label << ':' << o.ref.to_string();
  out << '\n';
  return out.str();
}

Circuit read_circuit_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

void write_circuit_file(const std::filesystem::path &path, const Circuit &c) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << serialize_circuit(c);
  if (!out)
    throw std::runtime_error("write failed for " + path.string());
}

std::string export_dot(const Circuit &c) {
  std::map<Ref, std::vector<std::string>> attached;
  for (const Output &o : c.outputs())
    attached[o.ref].push_back(o.label);
  auto label_of = [&](Ref r, const std::string &base) {
    std::string s = base;
    if (auto it = attached.find(r); it != attached.end()) {
      s += "\\n";
      for (std::size_t i = 0; i < it->second.size(); ++i)
        s += (i ? "," : "") + it->second[i];
    }
    return s;
  };
  auto style = [&](Ref r) { return attached.count(r) ? ", peripheries=2" : ""; };

  std::ostringstream out;
  out << "digraph circuit {\n  rankdir=TB;\n";
  for (int i = 1; i <= c.input_count(); ++i) {
    const Ref r = Ref::input(i);
    out << "  " << r.to_string() << " [shape=box, label=\"" << label_of(r, r.to_string()) << '"'
        << style(r) << "];\n";
  }
  for (bool b : {false, true}) {
    const Ref r = Ref::constant(b);
    if (attached.count(r))
      out << "  " << r.to_string() << " [shape=plaintext, label=\"" << label_of(r, b ? "1" : "0")
          << "\"];\n";
  }
  for (int i = 1; i <= c.size(); ++i) {
    const Ref r = Ref::gate(i);
    out << "  " << r.to_string() << " [shape=ellipse, label=\""
        << label_of(r, r.to_string() + " " + c.gate(i).op.name()) << '"' << style(r) << "];\n";
  }
  for (int i = 1; i <= c.size(); ++i) {
    const Gate &g = c.gate(i);
    out << "  " << g.left.to_string() << " -> g" << i << " [label=\"l\"];\n";
    out << "  " << g.right.to_string() << " -> g" << i << " [label=\"r\"];\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace circsat
