#include "adreplay/rewrite/urim.h"

#include <random>

#include <gtest/gtest.h>

#include "adreplay/util/timestamp.h"

namespace adreplay::rewrite {
namespace {

constexpr std::string_view kWayback = "https://web.archive.org/web/";

RewriteError::Kind ParseErrorKind(std::string_view text, std::string_view base = "/web/") {
  try {
    ParseUriM(text, base);
  } catch (const RewriteError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return RewriteError::Kind::kNotAUriM;
}

TEST(UriMTest, WaybackExample) {
  const std::string text = MakeUriM(kWayback, "https://www.google.com/", "20221220095518");
  EXPECT_EQ(text, "https://web.archive.org/web/20221220095518/https://www.google.com/");
  const UriM m = ParseUriM(text, kWayback);
  EXPECT_EQ(m.timestamp14, "20221220095518");
  EXPECT_EQ(m.modifier, Modifier::kNone);
  EXPECT_EQ(m.urir, "https://www.google.com/");
}

TEST(UriMTest, ScriptModifier) {
  EXPECT_EQ(MakeUriM(kWayback, "https://treid003.github.io/displayAds.js", "20240524092904",
                     Modifier::kJs),
            "https://web.archive.org/web/20240524092904js_/https://treid003.github.io/displayAds.js");
}

TEST(UriMTest, IdentityModifier) {
  const UriM m = ParseUriM(
      "https://web.archive.org/web/20230821142108id_/https://s0.2mdn.net/ads/x.html", kWayback);
  EXPECT_EQ(m.modifier, Modifier::kId);
  EXPECT_EQ(m.urir, "https://s0.2mdn.net/ads/x.html");
}

TEST(UriMTest, Errors) {
  EXPECT_EQ(ParseErrorKind("/web/2023id_/http://x/"), RewriteError::Kind::kInvalidTimestamp);
  EXPECT_EQ(ParseErrorKind("/web/20231301000000/http://x/"), RewriteError::Kind::kInvalidTimestamp);
  EXPECT_EQ(ParseErrorKind("/other/20230101000000/http://x/"), RewriteError::Kind::kNotAUriM);
  EXPECT_EQ(ParseErrorKind("/web/latest/http://x/"), RewriteError::Kind::kNotAUriM);
  EXPECT_EQ(ParseErrorKind("/web/20230101000000"), RewriteError::Kind::kNotAUriM);
  EXPECT_EQ(ParseErrorKind("/web/20230101000000zz_/http://x/"),
            RewriteError::Kind::kUnknownModifier);
  EXPECT_EQ(ParseErrorKind("/web/20230101000000/x/y"), RewriteError::Kind::kRelativeUrir);

  try {
    MakeUriM("/web/", "/relative", "20230101000000");
    FAIL();
  } catch (const RewriteError& e) {
    EXPECT_EQ(e.kind(), RewriteError::Kind::kRelativeUrir);
  }
  try {
    MakeUriM("/web/", "http://x/", "2023");
    FAIL();
  } catch (const RewriteError& e) {
    EXPECT_EQ(e.kind(), RewriteError::Kind::kInvalidTimestamp);
  }
}

TEST(UriMTest, ModifierTokens) {
  for (auto m : {Modifier::kNone, Modifier::kJs, Modifier::kCs, Modifier::kIm, Modifier::kIf,
                 Modifier::kId, Modifier::kOe}) {
    EXPECT_EQ(ParseModifierToken(ModifierToken(m)), m);
    const std::string_view token = ModifierToken(m);
    EXPECT_TRUE(token.empty() || token.ends_with("_"));
  }
  EXPECT_FALSE(ParseModifierToken("mp_"));
}

TEST(UriMTest, RoundTripRandomized) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::int64_t> when(0, 4'102'444'799);
  std::uniform_int_distribution<int> mod(0, 6), len(0, 12), ch(0, 61);
  const std::string alnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  const Modifier mods[] = {Modifier::kNone, Modifier::kJs, Modifier::kCs, Modifier::kIm,
                           Modifier::kIf,   Modifier::kId, Modifier::kOe};
  for (int i = 0; i < 1000; ++i) {
    const std::string ts =
        Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(when(rng)))).text();
    std::string urir = (i % 2 ? "https://" : "http://") + std::string(1, alnum[ch(rng) % 26]) +
                       ".test/";
    for (int k = len(rng); k > 0; --k) urir += alnum[ch(rng)];
    if (i % 3 == 0) urir += "?u=https://inner.test/a?b=1&c=/web/20230101000000/x";
    const Modifier m = mods[mod(rng)];
    const std::string base = i % 4 == 0 ? "https://replay.test/web/" : "/web/";
    const std::string text = MakeUriM(base, urir, ts, m);
    const UriM parsed = ParseUriM(text, base);
    EXPECT_EQ(parsed, (UriM{base, ts, m, urir}));
    EXPECT_EQ(parsed.ToString(), text);
  }
}

}  // namespace
}  // namespace adreplay::rewrite
