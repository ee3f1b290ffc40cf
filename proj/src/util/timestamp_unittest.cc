#include "adreplay/util/timestamp.h"

#include <random>

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace adreplay {
namespace {

TEST(Timestamp14Test, ParsesAndRenders) {
  const auto ts = Timestamp14::Parse("20230822161544");
  ASSERT_TRUE(ts);
  EXPECT_EQ(ts->text(), "20230822161544");
  EXPECT_EQ(ts->epoch_seconds(), 1692720944);
  EXPECT_EQ(Timestamp14().text(), "19700101000000");
  EXPECT_EQ(Timestamp14().epoch_seconds(), 0);
}

TEST(Timestamp14Test, RejectsInvalid) {
  for (const char* bad : {"", "2023", "2023082216154", "202308221615445", "20230230000000",
                          "20231301000000", "20230822246000", "2023082216154x", "20230822156060"}) {
    EXPECT_FALSE(Timestamp14::Parse(bad)) << bad;
  }
  EXPECT_TRUE(Timestamp14::Parse("20240229235959"));
  EXPECT_FALSE(Timestamp14::Parse("20230229000000"));
}

TEST(Timestamp14Test, AgreesWithCivilOracle) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> year(1970, 2099), month(1, 12), day(1, 28), hour(0, 23),
      minsec(0, 59);
  for (int i = 0; i < 500; ++i) {
    const int y = year(rng), mo = month(rng), d = day(rng), h = hour(rng), mi = minsec(rng),
              s = minsec(rng);
    char text[15];
    std::snprintf(text, sizeof text, "%04d%02d%02d%02d%02d%02d", y, mo, d, h, mi, s);
    const auto ts = Timestamp14::Parse(text);
    ASSERT_TRUE(ts) << text;
    EXPECT_EQ(ts->epoch_seconds(), testing::EpochSecondsOracle(y, mo, d, h, mi, s)) << text;
    EXPECT_EQ(Timestamp14::FromTime(ts->time()).text(), text);
  }
}

TEST(Timestamp14Test, OrderingAndDistance) {
  const auto a = *Timestamp14::Parse("20230101000000");
  const auto b = *Timestamp14::Parse("20230103000000");
  EXPECT_LT(a, b);
  EXPECT_EQ(SecondsBetween(a, b), 2 * 86400);
  EXPECT_EQ(SecondsBetween(b, a), 2 * 86400);
}

TEST(WarcDateTest, RoundTripAndFraction) {
  const auto t = Timestamp14::Parse("20230822161544")->time();
  EXPECT_EQ(FormatWarcDate(t), "2023-08-22T16:15:44Z");
  EXPECT_EQ(ParseWarcDate("2023-08-22T16:15:44Z"), t);
  EXPECT_EQ(ParseWarcDate("2023-08-22T16:15:44.123456Z"), t);
  EXPECT_FALSE(ParseWarcDate("2023-08-22 16:15:44"));
  EXPECT_EQ(FormatHttpDate(t), "Tue, 22 Aug 2023 16:15:44 GMT");
}

}  // namespace
}  // namespace adreplay
