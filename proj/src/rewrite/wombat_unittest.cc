#include "adreplay/rewrite/wombat.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "adreplay/rewrite/urim.h"
#include "testing/oracles.h"

namespace adreplay::rewrite {
namespace {

constexpr std::uint64_t kSeed = 1692720944;

TEST(WombatSecTest, Values) {
  EXPECT_EQ(ComputeWombatSec("19700101000000"), "0");
  EXPECT_EQ(ComputeWombatSec("20230822161544"), "1692720944");
  EXPECT_EQ(ComputeWombatSec("20221220095518"),
            std::to_string(testing::EpochSecondsOracle(2022, 12, 20, 9, 55, 18)));
  EXPECT_THROW(ComputeWombatSec("2023"), RewriteError);
}

TEST(SeededRandomTest, FirstDraws) {
  SeededRandom rng(kSeed);
  EXPECT_EQ(rng.state(), kSeed % 233280);
  EXPECT_EQ(rng.state(), 41264u);
  EXPECT_EQ(rng.NextState(), 100161u);
  SeededRandom zero(0);
  EXPECT_EQ(zero.NextState(), 49297u);
  EXPECT_EQ(SeededRandom(0).Next(), 49297.0 / 233280.0);
}

TEST(SeededRandomTest, MatchesClosedForm) {
  for (std::uint64_t seed : {std::uint64_t{0}, kSeed, std::uint64_t{233279}, ~std::uint64_t{0}}) {
    SeededRandom rng(seed);
    for (std::uint64_t k = 1; k <= 2000; ++k) {
      const std::uint32_t state = rng.NextState();
      ASSERT_EQ(state, testing::LcgStateAfter(seed, k)) << seed << " step " << k;
      ASSERT_LT(state, 233280u);
    }
  }
}

TEST(SeededRandomTest, DrawsInUnitInterval) {
  SeededRandom rng(kSeed);
  for (int i = 0; i < 233280; ++i) {
    const double d = rng.Next();
    ASSERT_GE(d, 0.0);
    ASSERT_LT(d, 1.0);
  }
}

TEST(SeededRandomTest, CryptoFill) {
  SeededRandom rng(kSeed);
  std::uint32_t one[1];
  rng.Fill(std::span<std::uint32_t>(one));
  EXPECT_EQ(one[0], static_cast<std::uint32_t>((std::uint64_t{100161} << 32) / 233280));

  SeededRandom a(kSeed), b(kSeed);
  std::uint8_t bytes[4];
  a.Fill(std::span<std::uint8_t>(bytes));
  for (std::uint8_t v : bytes) EXPECT_EQ(v, static_cast<std::uint8_t>(b.NextUint32()));

  SeededRandom c(kSeed), d(kSeed);
  std::uint64_t wide[2];
  c.Fill(std::span<std::uint64_t>(wide));
  for (std::uint64_t v : wide) {
    const std::uint64_t hi = d.NextUint32();
    EXPECT_EQ(v, (hi << 32) | d.NextUint32());
  }

  SeededRandom e(kSeed);
  e.Fill(std::span<std::uint16_t>());
  EXPECT_EQ(e.state(), kSeed % 233280);
}

TEST(SeededRandomTest, FillSharesStreamWithDraws) {
  SeededRandom mixed(kSeed), plain(kSeed);
  mixed.Next();
  std::uint32_t v[2];
  mixed.Fill(std::span<std::uint32_t>(v));
  const double after = mixed.Next();
  for (int i = 0; i < 3; ++i) plain.Next();
  EXPECT_EQ(after, plain.Next());
}

TEST(GoldenVectorsTest, ExactRendering) {
  EXPECT_TRUE(GoldenVectors(kSeed, 0).empty());
  EXPECT_EQ(FormatGoldenVectors(kSeed, 0), "");
  const auto v = GoldenVectors(kSeed, 3);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], "0.429359567901");
  EXPECT_TRUE(v[0].starts_with("0.4293"));
  for (size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(v[k], testing::ExactDrawDecimal(testing::LcgStateAfter(kSeed, k + 1)));
  }
  EXPECT_EQ(GoldenVectors(0, 1)[0], testing::ExactDrawDecimal(49297));
  EXPECT_EQ(GoldenVectors(kSeed, 50), GoldenVectors(kSeed, 50));
}

TEST(GoldenVectorsTest, CommittedFileMatches) {
  std::ifstream in(ADREPLAY_FIXTURE_DIR "/lcg_golden_1692720944_1000.txt", std::ios::binary);
  ASSERT_TRUE(in);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), FormatGoldenVectors(kSeed, 1000));
  std::string expected;
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    expected += testing::ExactDrawDecimal(testing::LcgStateAfter(kSeed, k)) + "\n";
  }
  EXPECT_EQ(text.str(), expected);
}

}  // namespace
}  // namespace adreplay::rewrite
