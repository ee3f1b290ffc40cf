#include "adreplay/fuzzy/fuzzy_rule.h"

#include <sstream>

#include <gtest/gtest.h>

#include "testing/ad_urls.h"

namespace adreplay::fuzzy {
namespace {

using testing::kAmazonAdmiUrl;
using testing::kRichloadReferrer;
using testing::kRichloadRequest;
using testing::kSafeframeUrl;

template <typename F>
FuzzyError::Kind ErrorKind(F&& f) {
  try {
    f();
  } catch (const FuzzyError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no FuzzyError thrown";
  return FuzzyError::Kind::kNotFound;
}

TEST(SafeframeTest, ReplacesRandomLabel) {
  EXPECT_EQ(NormalizeSafeframe(kSafeframeUrl),
            "*.safeframe.googlesyndication.com/safeframe/1-0-40/html/container.html");
  for (std::string_view label : testing::kReplaySafeframeLabels) {
    EXPECT_EQ(NormalizeSafeframe(testing::SafeframeUrlWithLabel(label)),
              NormalizeSafeframe(kSafeframeUrl));
  }
}

TEST(SafeframeTest, HostShapeBoundaries) {
  EXPECT_EQ(ErrorKind([] {
              NormalizeSafeframe("https://safeframe.googlesyndication.com/safeframe/1-0-40/x.html");
            }),
            FuzzyError::Kind::kRuleNotApplicable);
  // 31 and 33 characters, and a non-hex letter.
  for (std::string label : {"e76308bcf1c30aa4c853507f4b38228", "e76308bcf1c30aa4c853507f4b3822850",
                            "g76308bcf1c30aa4c853507f4b382285"}) {
    EXPECT_EQ(ErrorKind([&] { NormalizeSafeframe(testing::SafeframeUrlWithLabel(label)); }),
              FuzzyError::Kind::kRuleNotApplicable)
        << label;
  }
  EXPECT_EQ(ErrorKind([] { NormalizeSafeframe("https://h.test/"); }),
            FuzzyError::Kind::kRuleNotApplicable);
  // Hosts compare case-insensitively.
  EXPECT_EQ(NormalizeSafeframe(testing::SafeframeUrlWithLabel("E76308BCF1C30AA4C853507F4B382285")),
            NormalizeSafeframe(kSafeframeUrl));
}

TEST(AmazonRndTest, DropsOnlyRnd) {
  const std::string key = NormalizeAmazonRnd(kAmazonAdmiUrl);
  std::string without(kAmazonAdmiUrl);
  without.erase(without.find("&rnd="), std::string("&rnd=").size() + testing::kAmazonRnd.size());
  EXPECT_EQ(key, cdx::Canonicalize(without).key());
  EXPECT_EQ(key.find("rnd="), std::string::npos);
  EXPECT_NE(key.find("crid=lm7xjkp3"), std::string::npos);
  EXPECT_EQ(NormalizeAmazonRnd(testing::AmazonAdmiUrlWithRnd("123")), key);
}

TEST(AmazonRndTest, NotApplicable) {
  EXPECT_EQ(ErrorKind([] { NormalizeAmazonRnd("https://aax.amazon-adsystem.com/e/dtb/admi?b=1"); }),
            FuzzyError::Kind::kRuleNotApplicable);
  EXPECT_EQ(ErrorKind([] { NormalizeAmazonRnd("https://h.test/x?rnd=1"); }),
            FuzzyError::Kind::kRuleNotApplicable);
}

TEST(RichloadTest, SpecFromReferrer) {
  const SearchSpec spec = ResolveRichload(kRichloadRequest, kRichloadReferrer);
  EXPECT_EQ(spec.host, "cdn.flashtalking.com");
  EXPECT_EQ(spec.ad_id, "173980");
  EXPECT_TRUE(spec.Matches("cdn.flashtalking.com/173980/300x600_Master_Richload_Compressed/index.html"));
  EXPECT_FALSE(spec.Matches("cdn.flashtalking.com/173980/4163777/index.html"));
  EXPECT_FALSE(spec.Matches("cdn.flashtalking.com/1739801/x_Richload/index.html"));
  EXPECT_FALSE(spec.Matches("other.test/173980/Richload/index.html"));
}

TEST(RichloadTest, Errors) {
  EXPECT_EQ(ErrorKind([] { ResolveRichload(kRichloadRequest, "https://cdn.flashtalking.com/ad/x.html"); }),
            FuzzyError::Kind::kNoAdIdInReferrer);
  EXPECT_EQ(ErrorKind([] { ResolveRichload(kRichloadRequest, std::nullopt); }),
            FuzzyError::Kind::kNoAdIdInReferrer);
  EXPECT_EQ(ErrorKind([] {
              ResolveRichload("https://cdn.flashtalking.com/173980/index.html", kRichloadReferrer);
            }),
            FuzzyError::Kind::kRuleNotApplicable);
}

TEST(ExtractAdIdTest, FirstNumericSegment) {
  EXPECT_EQ(ExtractAdId("https://cdn.flashtalking.com/173980/4163777/index.html"), "173980");
  EXPECT_EQ(ExtractAdId("https://h.test/a1/22/b"), "22");
  EXPECT_FALSE(ExtractAdId("https://h.test/a1/b2"));
}

TEST(GenericQueryTest, StripsQuery) {
  EXPECT_EQ(GenericQueryFuzzy("https://a.test/x?cb=9"), "a.test/x");
  EXPECT_EQ(ErrorKind([] { GenericQueryFuzzy("https://a.test/x"); }),
            FuzzyError::Kind::kRuleNotApplicable);
}

TEST(RuleConfigTest, BuiltinsRoundTrip) {
  const auto rules = BuiltinRules();
  ASSERT_EQ(rules.size(), 4u);
  std::istringstream in(FormatRuleConfig(rules));
  EXPECT_EQ(ParseRuleConfig(in), rules);
}

TEST(RuleConfigTest, ShippedFileMatchesBuiltins) {
  EXPECT_EQ(LoadRuleFile(ADREPLAY_SOURCE_DIR "/config/default_rules.conf"), BuiltinRules());
}

TEST(RuleConfigTest, ParsesCommentsAndDefaults) {
  std::istringstream in(
      "# ad services\n"
      "\n"
      "innovid priority=15 transform=strip_param host=*.innovid.com param=cb  # cache buster\n"
      "ft priority=40 transform=referrer_ad_id path=*richload*\n");
  const auto rules = ParseRuleConfig(in);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].name, "innovid");
  EXPECT_EQ(rules[0].priority, 15);
  EXPECT_EQ(rules[0].transform, TransformKind::kStripParam);
  EXPECT_EQ(rules[0].host_pattern, "*.innovid.com");
  EXPECT_EQ(rules[0].argument, "cb");
  EXPECT_EQ(rules[1].argument, "richload");
  EXPECT_EQ(rules[1].host_pattern, "*");
}

TEST(RuleConfigTest, RejectsBadConfig) {
  for (const char* text : {
           "a priority=1 transform=teleport\n",
           "a priority=1 transform=strip_query colour=red\n",
           "a priority=1 transform=strip_query\na priority=2 transform=strip_query\n",
           "a priority=1 transform=strip_query\nb priority=1 transform=strip_query\n",
           "a priority=1 transform=strip_param\n",
           "a transform=strip_query\n",
           "a priority=x transform=strip_query\n",
           "a priority=1\n",
       }) {
    std::istringstream in(text);
    EXPECT_EQ(ErrorKind([&] { ParseRuleConfig(in); }), FuzzyError::Kind::kBadRuleConfig) << text;
  }
}

TEST(RuleAppliesTest, GlobsIgnoreCaseAndPort) {
  const FuzzyRule rule{"r", 1, "*.EXAMPLE.test", "/ads/*", TransformKind::kStripQuery, ""};
  EXPECT_TRUE(RuleApplies(rule, cdx::Canonicalize("https://cdn.example.test:8443/ads/x?y=1")));
  EXPECT_FALSE(RuleApplies(rule, cdx::Canonicalize("https://cdn.example.test/img/x")));
  EXPECT_FALSE(RuleApplies(rule, cdx::Canonicalize("https://example.test/ads/x")));
}

TEST(DeriveAlternateKeyTest, PerTransform) {
  const auto rules = BuiltinRules();
  const auto url = cdx::Canonicalize("https://a.test/x?cb=1&rnd=2");
  EXPECT_FALSE(DeriveAlternateKey(rules[0], url));
  EXPECT_FALSE(DeriveAlternateKey(rules[1], url));
  EXPECT_FALSE(DeriveAlternateKey(rules[2], url));
  EXPECT_EQ(DeriveAlternateKey(rules[3], url), "a.test/x");
}

}  // namespace
}  // namespace adreplay::fuzzy
