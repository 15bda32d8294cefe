#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "levywalk/random.hpp"

namespace levywalk {
namespace {

TEST(Philox, KnownAnswerVectors) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, SameSeedAndStreamReplay) {
  RandomStream a(42, 17), b(42, 17);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.sign(), b.sign());
  }
}

TEST(RandomStream, StreamsAndSeedsDiffer) {
  std::set<double> firsts;
  for (std::uint64_t s = 0; s < 100; ++s) firsts.insert(RandomStream(1, s).uniform());
  for (std::uint64_t seed = 2; seed < 102; ++seed) firsts.insert(RandomStream(seed, 0).uniform());
  EXPECT_EQ(firsts.size(), 200u);
}

TEST(RandomStream, UniformIsOpenAndCentered) {
  RandomStream s(3, 0);
  constexpr int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum_sq / n, 1.0 / 3.0, 4.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST(RandomStream, SignsAreBalanced) {
  RandomStream s(5, 9);
  constexpr int n = 1000000;
  long total = 0;
  for (int i = 0; i < n; ++i) {
    const int v = s.sign();
    ASSERT_TRUE(v == 1 || v == -1);
    total += v;
  }
  EXPECT_LT(std::abs(static_cast<double>(total)), 4.0 * std::sqrt(static_cast<double>(n)));
}

}  // namespace
}  // namespace levywalk
