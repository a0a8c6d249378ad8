#include "circsat/functions.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

#include "circsat/circuit.hpp"

namespace circsat {

namespace {

void check_inputs(int n) {
  if (n < 1 || n > kExhaustiveLimit)
    throw std::invalid_argument("input count " + std::to_string(n) + " outside 1.." +
                                std::to_string(kExhaustiveLimit));
}

int popcount(std::uint64_t x) { return std::popcount(x); }

} // namespace

int sum_width(int n) {
  int m = 0;
  while ((1 << m) < n + 1)
    ++m;
  return std::max(m, 1);
}

FunctionSpec family_sum(int n) {
  check_inputs(n);
  const int m = sum_width(n);
  FunctionSpec spec(n, m);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const int s = popcount(x);
    for (int h = 0; h < m; ++h)
      if ((s >> h) & 1)
        spec.set(h, x, true);
  }
  spec.set_labels(default_labels(m, "w"));
  return spec;
}

FunctionSpec family_mod(int n, int modulus, int r) {
  check_inputs(n);
  if (modulus < 2)
    throw std::invalid_argument("modulus must be at least 2");
  if (r < 0 || r >= modulus)
    throw std::invalid_argument("remainder " + std::to_string(r) + " out of range for modulus " +
                                std::to_string(modulus));
  FunctionSpec spec(n, 1);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if (popcount(x) % modulus == r)
      spec.set(0, x, true);
  return spec;
}

FunctionSpec family_thr(int n, int k) {
  check_inputs(n);
  if (k < 0 || k > n + 1)
    throw std::invalid_argument("threshold " + std::to_string(k) + " outside 0.." +
                                std::to_string(n + 1));
  FunctionSpec spec(n, 1);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if (popcount(x) >= k)
      spec.set(0, x, true);
  return spec;
}

std::vector<std::pair<bool, bool>> mod3_encode(int rem) {
  switch (rem) {
  case 0:
    return {{false, false}};
  case 1:
    return {{false, true}};
  case 2:
    return {{true, false}, {true, true}};
  }
  throw std::invalid_argument("remainder must be 0, 1 or 2");
}

int mod3_decode(bool r0, bool r1) { return r0 ? 2 : (r1 ? 1 : 0); }

std::string Mod3Block::name() const {
  switch (kind) {
  case Kind::In:
    return "in_" + std::to_string(width);
  case Kind::Mid:
    return "mid_" + std::to_string(width);
  case Kind::Out:
    return "out_" + std::to_string(width) + "_r" + std::to_string(r);
  }
  return "?";
}

Mod3Block Mod3Block::parse(std::string_view name) {
  for (int k = 2; k <= 4; ++k)
    if (name == in(k).name())
      return in(k);
  if (name == mid().name())
    return mid();
  for (int l = 1; l <= 3; ++l)
    for (int r = 0; r < 3; ++r)
      if (name == out(l, r).name())
        return out(l, r);
  throw std::invalid_argument("unknown mod-3 block '" + std::string(name) + "'");
}

PartialSpec mod3_block_spec(const Mod3Block &block) {
  auto set_encoding = [](PartialSpec &spec, std::uint64_t x, int rem) {
    spec.set(0, x, rem == 2 ? Tri::One : Tri::Zero);
    spec.set(1, x, rem == 2 ? Tri::DontCare : (rem == 1 ? Tri::One : Tri::Zero));
  };
  switch (block.kind) {
  case Mod3Block::Kind::In: {
    if (block.width < 2 || block.width > 4)
      throw std::invalid_argument("IN block width must be 2, 3 or 4");
    PartialSpec spec(block.width, 2);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << block.width); ++x)
      set_encoding(spec, x, popcount(x) % 3);
    spec.set_labels({"r0", "r1"});
    return spec;
  }
  case Mod3Block::Kind::Mid: {
    if (block.width != 3)
      throw std::invalid_argument("MID block width must be 3");
    PartialSpec spec(5, 2);
    for (std::uint64_t x = 0; x < 32; ++x) {
      const int rem = mod3_decode(x & 1, (x >> 1) & 1);
      set_encoding(spec, x, (rem + popcount(x >> 2)) % 3);
    }
    spec.set_labels({"r0", "r1"});
    return spec;
  }
  case Mod3Block::Kind::Out: {
    if (block.width < 1 || block.width > 3 || block.r < 0 || block.r > 2)
      throw std::invalid_argument("invalid OUT block " + block.name());
    const int n = 2 + block.width;
    PartialSpec spec(n, 1);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const int rem = mod3_decode(x & 1, (x >> 1) & 1);
      spec.set(0, x, (rem + popcount(x >> 2)) % 3 == block.r ? Tri::One : Tri::Zero);
    }
    spec.set_labels({"y"});
    return spec;
  }
  }
  throw std::invalid_argument("invalid mod-3 block");
}

PartialSpec mdfa_spec() {
  PartialSpec spec(5, 3);
  for (std::uint64_t u = 0; u < 32; ++u) {
    auto bit = [&](int i) { return static_cast<int>((u >> (i - 1)) & 1); };
    const int s = (bit(1) ^ bit(2)) + bit(2) + bit(3) + bit(4) + (bit(4) ^ bit(5));
    const int b0 = s & 1;
    const int h = (s - b0) / 2;
    spec.set(0, u, b0 ? Tri::One : Tri::Zero);
    if (h == 0) {
      spec.set(1, u, Tri::Zero);
      spec.set(2, u, Tri::Zero);
    } else if (h == 2) {
      spec.set(1, u, Tri::One);
      spec.set(2, u, Tri::Zero);
    } else {
      spec.set(1, u, Tri::DontCare);
      spec.set(2, u, Tri::One);
    }
  }
  spec.set_labels({"b0", "a1", "a1b1"});
  return spec;
}

FunctionSpec spec_from_hex(int n, int m, const std::vector<std::string> &hex) {
  check_inputs(n);
  if (m < 1 || static_cast<int>(hex.size()) != m)
    throw std::invalid_argument("expected " + std::to_string(m) + " hex tables, got " +
                                std::to_string(hex.size()));
  const std::uint64_t bits = std::uint64_t{1} << n;
  const std::size_t digits = bits < 4 ? 1 : bits / 4;
  FunctionSpec spec(n, m);
  for (int h = 0; h < m; ++h) {
    const std::string &s = hex[h];
    if (s.size() != digits)
      throw std::invalid_argument("hex table " + std::to_string(h) + " has " +
                                  std::to_string(s.size()) + " digits, expected " +
                                  std::to_string(digits));
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = s[digits - 1 - d];
      int v = 0;
      if (c >= '0' && c <= '9')
        v = c - '0';
      else if (c >= 'a' && c <= 'f')
        v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        v = c - 'A' + 10;
      else
        throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t j = d * 4 + b;
        if (!((v >> b) & 1))
          continue;
        if (j >= bits)
          throw std::invalid_argument("hex table " + std::to_string(h) + " sets bit " +
                                      std::to_string(j) + " beyond 2^n");
        spec.set(h, j, true);
      }
    }
  }
  return spec;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos)
      return out;
    start = p + 1;
  }
}

int to_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

} // namespace

FunctionSpec parse_function(std::string_view text) {
  const auto parts = split(text, ':');
  const auto kind = parts.front();
  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw std::invalid_argument("malformed function '" + std::string(text) + "'");
  };
  if (kind == "sum") {
    need(2);
    return family_sum(to_int(parts[1], "input count"));
  }
  if (kind == "mod") {
    need(4);
    return family_mod(to_int(parts[1], "input count"), to_int(parts[2], "modulus"),
                      to_int(parts[3], "remainder"));
  }
  if (kind == "thr") {
    need(3);
    return family_thr(to_int(parts[1], "input count"), to_int(parts[2], "threshold"));
  }
  if (kind == "tt") {
    need(4);
    std::vector<std::string> hex;
    for (auto h : split(parts[3], ','))
      hex.emplace_back(h);
    return spec_from_hex(to_int(parts[1], "input count"), to_int(parts[2], "output count"), hex);
  }
  throw std::invalid_argument("unknown function kind '" + std::string(kind) + "'");
}

} // namespace circsat
