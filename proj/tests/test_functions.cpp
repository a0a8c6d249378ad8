#include <gtest/gtest.h>

#include "circsat/functions.hpp"
#include "test_util.hpp"

using namespace circsat;
using testutil::popcount;

namespace {

std::uint64_t index_of(std::initializer_list<int> bits) {
  std::uint64_t x = 0;
  int i = 0;
  for (int b : bits)
    x |= std::uint64_t(b) << i++;
  return x;
}

} // namespace

TEST(FamilySum, Examples) {
  const FunctionSpec s2 = family_sum(2);
  EXPECT_EQ(s2.row(index_of({1, 1})), (std::vector<bool>{false, true}));
  const FunctionSpec s3 = family_sum(3);
  EXPECT_EQ(s3.row(index_of({1, 1, 0})), (std::vector<bool>{false, true}));
  EXPECT_EQ(family_sum(7).output_count(), 3);
  EXPECT_EQ(family_sum(8).output_count(), 4);
  EXPECT_EQ(family_sum(1).output_count(), 1);
  EXPECT_EQ(s3.labels(), (std::vector<std::string>{"w0", "w1"}));
}

TEST(FamilySum, AllOnesEncodesN) {
  for (int n = 1; n <= 12; ++n) {
    const FunctionSpec s = family_sum(n);
    const std::uint64_t ones = (std::uint64_t{1} << n) - 1;
    for (int h = 0; h < s.output_count(); ++h)
      EXPECT_EQ(s.get(h, ones), ((n >> h) & 1) != 0) << n;
    EXPECT_EQ(s.output_count(), sum_width(n));
  }
}

TEST(FamilyMod, Examples) {
  EXPECT_TRUE(family_mod(3, 3, 0).get(0, index_of({0, 0, 0})));
  EXPECT_FALSE(family_mod(3, 3, 0).get(0, index_of({1, 1, 0})));
  const FunctionSpec m = family_mod(4, 3, 2);
  for (std::uint64_t x = 0; x < 16; ++x)
    EXPECT_EQ(m.get(0, x), popcount(x) == 2 || popcount(x) == 5);
  EXPECT_THROW(family_mod(4, 3, 3), std::invalid_argument);
  EXPECT_THROW(family_mod(4, 1, 0), std::invalid_argument);
}

TEST(FamilyMod, RemaindersPartitionInputs) {
  for (int mod = 2; mod <= 5; ++mod)
    for (std::uint64_t x = 0; x < 256; ++x) {
      int fired = 0;
      for (int r = 0; r < mod; ++r)
        fired += family_mod(8, mod, r).get(0, x);
      EXPECT_EQ(fired, 1);
    }
}

TEST(FamilyThr, Examples) {
  const FunctionSpec t = family_thr(12, 2);
  EXPECT_FALSE(t.get(0, 1));
  EXPECT_TRUE(t.get(0, 0b101));
  const FunctionSpec t45 = family_thr(5, 4);
  for (std::uint64_t x = 0; x < 32; ++x)
    EXPECT_EQ(t45.get(0, x), popcount(x) >= 4);
  EXPECT_TRUE(family_thr(3, 0).get(0, 0));
  EXPECT_FALSE(family_thr(3, 4).get(0, 7));
}

TEST(Mod3Encoding, Values) {
  using P = std::pair<bool, bool>;
  EXPECT_EQ(mod3_encode(0), (std::vector<P>{{false, false}}));
  EXPECT_EQ(mod3_encode(1), (std::vector<P>{{false, true}}));
  EXPECT_EQ(mod3_encode(2), (std::vector<P>{{true, false}, {true, true}}));
  for (int rem = 0; rem < 3; ++rem)
    for (auto [r0, r1] : mod3_encode(rem))
      EXPECT_EQ(mod3_decode(r0, r1), rem);
  EXPECT_THROW(mod3_encode(3), std::invalid_argument);
}

TEST(Mod3BlockSpec, Examples) {
  const PartialSpec in2 = mod3_block_spec(Mod3Block::in(2));
  EXPECT_EQ(in2.at(0, 3), Tri::One);
  EXPECT_EQ(in2.at(1, 3), Tri::DontCare);

  // (r0, r1) = (0, 1), fresh bits 1, 1, 1
  const PartialSpec mid = mod3_block_spec(Mod3Block::mid());
  const std::uint64_t x = index_of({0, 1, 1, 1, 1});
  EXPECT_EQ(mid.at(0, x), Tri::Zero);
  EXPECT_EQ(mid.at(1, x), Tri::One);

  const PartialSpec out11 = mod3_block_spec(Mod3Block::out(1, 1));
  EXPECT_EQ(out11.at(0, index_of({0, 0, 1})), Tri::One);
  EXPECT_EQ(out11.input_count(), 3);

  for (const char *name : {"in_2", "in_3", "in_4", "mid_3", "out_2_r0", "out_1_r1", "out_3_r2"})
    EXPECT_EQ(Mod3Block::parse(name).name(), name);
  EXPECT_THROW(Mod3Block::parse("mid_4"), std::invalid_argument);
  EXPECT_THROW(mod3_block_spec(Mod3Block::in(5)), std::invalid_argument);
}

// Resolves every don't-care of the chain with an arbitrary rule and checks
// the composition against the family.
TEST(Mod3BlockSpec, ChainComposes) {
  auto step = [](const PartialSpec &spec, std::uint64_t x, bool pick) {
    const bool r0 = spec.at(0, x) == Tri::One;
    const Tri t1 = spec.at(1, x);
    const bool r1 = t1 == Tri::DontCare ? pick : t1 == Tri::One;
    return std::pair<bool, bool>{r0, r1};
  };
  for (int n = 3; n <= 12; ++n)
    for (int k = 2; k <= 4; ++k)
      for (int l = 1; l <= 3; ++l) {
        if ((n - k - l) < 0 || (n - k - l) % 3 != 0)
          continue;
        const int mids = (n - k - l) / 3;
        for (int r = 0; r < 3; ++r) {
          const PartialSpec in = mod3_block_spec(Mod3Block::in(k));
          const PartialSpec mid = mod3_block_spec(Mod3Block::mid());
          const PartialSpec out = mod3_block_spec(Mod3Block::out(l, r));
          for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            const bool pick = popcount(x * 0x9E3779B97F4A7C15ull) & 1;
            auto [r0, r1] = step(in, x & ((1u << k) - 1), pick);
            int pos = k;
            for (int i = 0; i < mids; ++i) {
              const std::uint64_t y = r0 | (r1 << 1) | (((x >> pos) & 7) << 2);
              std::tie(r0, r1) = step(mid, y, !pick);
              pos += 3;
            }
            const std::uint64_t z = r0 | (r1 << 1) | (((x >> pos) & ((1u << l) - 1)) << 2);
            ASSERT_EQ(out.at(0, z) == Tri::One, popcount(x) % 3 == r)
                << n << ' ' << k << ' ' << l << ' ' << r;
          }
        }
      }
}

TEST(MdfaSpec, Examples) {
  const PartialSpec s = mdfa_spec();
  EXPECT_EQ(s.at(0, 0), Tri::Zero);
  EXPECT_EQ(s.at(1, 0), Tri::Zero);
  EXPECT_EQ(s.at(2, 0), Tri::Zero);
  const std::uint64_t u = index_of({0, 1, 1, 1, 0});
  EXPECT_EQ(s.at(0, u), Tri::One);
  EXPECT_EQ(s.at(1, u), Tri::One);
  EXPECT_EQ(s.at(2, u), Tri::Zero);
  // x = (1,0,0,0,0): u = (1,0,0,0,0), s = 1, h = 0
  EXPECT_EQ(s.at(0, 1), Tri::One);
  // x = (1,1,0,0,0): u1 = 0, u2 = 1, s = 2, h = 1, a1 free
  const std::uint64_t v = index_of({0, 1, 0, 0, 0});
  EXPECT_EQ(s.at(0, v), Tri::Zero);
  EXPECT_EQ(s.at(1, v), Tri::DontCare);
  EXPECT_EQ(s.at(2, v), Tri::One);
}

TEST(SpecFromHex, Examples) {
  const FunctionSpec x = spec_from_hex(2, 1, {"6"});
  EXPECT_EQ(x.output(0).words()[0], 0b0110u);
  const FunctionSpec p = spec_from_hex(3, 1, {"96"});
  for (std::uint64_t i = 0; i < 8; ++i)
    EXPECT_EQ(p.get(0, i), (popcount(i) & 1) != 0);
  EXPECT_THROW(spec_from_hex(2, 1, {"123"}), std::invalid_argument);
  EXPECT_THROW(spec_from_hex(2, 1, {"g"}), std::invalid_argument);
  EXPECT_THROW(spec_from_hex(2, 2, {"6"}), std::invalid_argument);
}

TEST(ParseFunction, Grammar) {
  EXPECT_EQ(parse_function("sum:5"), family_sum(5));
  EXPECT_EQ(parse_function("mod:4:3:2"), family_mod(4, 3, 2));
  EXPECT_EQ(parse_function("thr:12:2"), family_thr(12, 2));
  EXPECT_EQ(parse_function("tt:2:2:6,8"), family_sum(2));
  for (const char *bad : {"", "sum", "sum:", "sum:x", "sum:0", "mod:4:3", "mod:4:3:3", "thr:3",
                          "tt:2:1:6,8", "foo:1", "sum:5:1", "sum:25"})
    EXPECT_THROW(parse_function(bad), std::invalid_argument) << bad;
}
