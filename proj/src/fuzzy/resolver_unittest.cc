#include "adreplay/fuzzy/resolver.h"

#include <random>

#include <gtest/gtest.h>

#include "testing/ad_urls.h"

namespace adreplay::fuzzy {
namespace {

Timestamp14 Ts(std::string_view text) { return *Timestamp14::Parse(text); }

cdx::CdxEntry Capture(std::string_view url, std::string_view ts, int status = 200) {
  cdx::CdxEntry e;
  e.key = cdx::Canonicalize(url).key();
  e.timestamp = Ts(ts);
  e.original_uri = std::string(url);
  e.status = status;
  e.mime = "text/html";
  e.digest = "sha1:" + std::string(url) + std::string(ts);
  return e;
}

Resolver Over(std::vector<cdx::CdxEntry> entries) {
  return Resolver(std::make_shared<const cdx::CaptureIndex>(std::move(entries)));
}

TEST(ResolverTest, ExactHitWins) {
  const Resolver r = Over({Capture("https://a.test/x?cb=1", "20230101000000"),
                           Capture("https://a.test/x", "20230101000000")});
  const Resolution res = r.Resolve("https://a.test/x?cb=1", Ts("20230101000000"));
  EXPECT_EQ(res.rule_used, kExactRule);
  EXPECT_EQ(res.entry.original_uri, "https://a.test/x?cb=1");
  EXPECT_EQ(res.candidates_considered, 1u);
}

TEST(ResolverTest, SafeframeAnyLabel) {
  const Resolver r = Over({Capture(testing::kSafeframeUrl, "20230822161544")});
  for (std::string_view label : testing::kReplaySafeframeLabels) {
    const Resolution res =
        r.Resolve(testing::SafeframeUrlWithLabel(label), Ts("20230822161544"));
    EXPECT_EQ(res.rule_used, "safeframe");
    EXPECT_EQ(res.entry.original_uri, testing::kSafeframeUrl);
  }
}

TEST(ResolverTest, SafeframeDifferentPathMisses) {
  const Resolver r = Over({Capture(testing::kSafeframeUrl, "20230822161544")});
  const auto outcome = r.TryResolve(
      "https://af393d3d232450caab92d97eaefb484e.safeframe.googlesyndication.com/safeframe/1-0-41/"
      "html/container.html",
      Ts("20230822161544"));
  EXPECT_FALSE(outcome.resolution);
}

TEST(ResolverTest, AmazonRndAnyValue) {
  const Resolver r = Over({Capture(testing::kAmazonAdmiUrl, "20230207000000")});
  const Resolution res =
      r.Resolve(testing::AmazonAdmiUrlWithRnd("8954498773591675828862700"), Ts("20230207000000"));
  EXPECT_EQ(res.rule_used, "amazon_rnd");
  EXPECT_EQ(res.entry.original_uri, testing::kAmazonAdmiUrl);
}

TEST(ResolverTest, AmazonRequestWithoutRndFallsToGeneric) {
  const Resolver r = Over({Capture(testing::kAmazonAdmiUrl, "20230207000000")});
  std::string without(testing::kAmazonAdmiUrl);
  without.erase(without.find("&rnd="), 5 + testing::kAmazonRnd.size());
  const auto outcome = r.TryResolve(without, Ts("20230207000000"));
  ASSERT_TRUE(outcome.resolution);
  EXPECT_EQ(outcome.resolution->rule_used, "generic");
  EXPECT_EQ(outcome.attempts[2], (RuleAttempt{"amazon_rnd", 0}));
}

TEST(ResolverTest, AmazonSiblingsPickDeterministically) {
  const Resolver r = Over({Capture("https://aax.amazon-adsystem.com/e/dtb/admi?b=1&rnd=111", "20230207000000"),
                           Capture("https://aax.amazon-adsystem.com/e/dtb/admi?b=1&rnd=222", "20230207000000")});
  const Resolution first =
      r.Resolve("https://aax.amazon-adsystem.com/e/dtb/admi?b=1&rnd=333", Ts("20230207000000"));
  EXPECT_EQ(first.candidates_considered, 2u);
  EXPECT_EQ(first.entry.original_uri, "https://aax.amazon-adsystem.com/e/dtb/admi?b=1&rnd=111");
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(r.Resolve("https://aax.amazon-adsystem.com/e/dtb/admi?b=1&rnd=" + std::to_string(i),
                        Ts("20230207000000")),
              first);
  }
}

TEST(ResolverTest, Richload) {
  const Resolver r = Over({Capture(testing::kRichloadCapture, "20230207000000"),
                           Capture("https://cdn.flashtalking.com/173980/4163777/index.html", "20230207000000"),
                           Capture("https://cdn.flashtalking.com/99999/300x600_Richload/index.html", "20230207000000")});
  const Resolution res = r.Resolve(testing::kRichloadRequest, Ts("20230207000000"),
                                   testing::kRichloadReferrer);
  EXPECT_EQ(res.rule_used, "richload");
  EXPECT_EQ(res.entry.original_uri, testing::kRichloadCapture);
  EXPECT_EQ(res.candidates_considered, 1u);

  const auto no_referrer = r.TryResolve(testing::kRichloadRequest, Ts("20230207000000"));
  EXPECT_FALSE(no_referrer.resolution);
}

TEST(ResolverTest, RichloadNearestTimestamp) {
  const std::string other = "https://cdn.flashtalking.com/173980/160x600_Richload/index.html";
  const Resolver r = Over({Capture(testing::kRichloadCapture, "20230101000000"),
                           Capture(other, "20230207000000")});
  EXPECT_EQ(r.Resolve(testing::kRichloadRequest, Ts("20230206000000"), testing::kRichloadReferrer)
                .entry.original_uri,
            other);
}

TEST(ResolverTest, GenericFallback) {
  const Resolver r = Over({Capture("https://a.test/x?cb=1", "20230101000000")});
  const Resolution res = r.Resolve("https://a.test/x?cb=2", Ts("20230101000000"));
  EXPECT_EQ(res.rule_used, "generic");
  EXPECT_EQ(res.entry.original_uri, "https://a.test/x?cb=1");
}

TEST(ResolverTest, GenericMatchesBruteForceStrippedKey) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> path(0, 5), cb(0, 9), day(1, 28);
  std::vector<cdx::CdxEntry> entries;
  for (int i = 0; i < 60; ++i) {
    char ts[15];
    std::snprintf(ts, sizeof ts, "202301%02d000000", day(rng));
    entries.push_back(Capture("https://g.test/p" + std::to_string(path(rng)) + "?cb=" +
                                  std::to_string(cb(rng)),
                              ts));
  }
  const auto index = std::make_shared<const cdx::CaptureIndex>(entries);
  const Resolver r(index);
  for (int q = 0; q < 200; ++q) {
    const std::string url = "https://g.test/p" + std::to_string(path(rng)) + "?cb=x" +
                            std::to_string(cb(rng));
    char ts[15];
    std::snprintf(ts, sizeof ts, "202301%02d120000", day(rng));
    const std::string stripped = url.substr(0, url.find('?'));
    std::vector<const cdx::CdxEntry*> expected;
    for (const auto& e : index->entries()) {
      if (e.original_uri.substr(0, e.original_uri.find('?')) == stripped) expected.push_back(&e);
    }
    const auto outcome = r.TryResolve(url, Ts(ts));
    ASSERT_EQ(outcome.resolution.has_value(), !expected.empty());
    if (!expected.empty()) {
      EXPECT_EQ(outcome.resolution->rule_used, "generic");
      EXPECT_EQ(outcome.resolution->candidates_considered, expected.size());
      EXPECT_EQ(outcome.resolution->entry, *PickCandidate(expected, Ts(ts)));
    }
  }
}

TEST(ResolverTest, MissListsEveryRule) {
  const Resolver r = Over({Capture("https://a.test/", "20230101000000")});
  const auto outcome = r.TryResolve("https://b.test/x?y=1", Ts("20230101000000"));
  EXPECT_FALSE(outcome.resolution);
  const std::vector<RuleAttempt> expected = {
      {"exact", 0}, {"safeframe", 0}, {"amazon_rnd", 0}, {"richload", 0}, {"generic", 0}};
  EXPECT_EQ(outcome.attempts, expected);
  try {
    r.Resolve("https://b.test/x?y=1", Ts("20230101000000"));
    FAIL();
  } catch (const FuzzyError& e) {
    EXPECT_EQ(e.kind(), FuzzyError::Kind::kNotFound);
  }
}

TEST(ResolverTest, RuleSoundness) {
  const Resolver r = Over({Capture(testing::kSafeframeUrl, "20230822161544"),
                           Capture(testing::kAmazonAdmiUrl, "20230207000000")});
  const std::string sf = testing::SafeframeUrlWithLabel(testing::kReplaySafeframeLabels[3]);
  EXPECT_EQ(NormalizeSafeframe(r.Resolve(sf, Ts("20230822161544")).entry.original_uri),
            NormalizeSafeframe(sf));
  const std::string amz = testing::AmazonAdmiUrlWithRnd("42");
  EXPECT_EQ(NormalizeAmazonRnd(r.Resolve(amz, Ts("20230822161544")).entry.original_uri),
            NormalizeAmazonRnd(amz));
}

TEST(ResolverTest, CustomRuleOrder) {
  std::vector<FuzzyRule> rules = {
      {"late", 50, "*", "*", TransformKind::kStripQuery, ""},
      {"early", 5, "*.test", "*", TransformKind::kStripParam, "cb"},
  };
  const Resolver r(std::make_shared<const cdx::CaptureIndex>(
                       std::vector{Capture("https://a.test/x?k=1", "20230101000000")}),
                   rules);
  EXPECT_EQ(r.rules()[0].name, "early");
  EXPECT_EQ(r.Resolve("https://a.test/x?k=1&cb=5", Ts("20230101000000")).rule_used, "early");

  rules[1].priority = 50;
  EXPECT_THROW(Resolver(nullptr, rules), FuzzyError);
}

TEST(PickCandidateTest, Order) {
  auto a = Capture("https://a.test/1", "20230101000000");
  auto b = Capture("https://a.test/2", "20230103000000");
  auto c = Capture("https://a.test/0", "20230101000000", 503);
  EXPECT_EQ(PickCandidate({&b, &a}, Ts("20230102000000")), &a);
  EXPECT_EQ(PickCandidate({&c, &b}, Ts("20230101000000")), &b);
  EXPECT_EQ(PickCandidate({&c}, Ts("20230101000000")), &c);
  auto a2 = Capture("https://a.test/0", "20230101000000");
  EXPECT_EQ(PickCandidate({&a, &a2}, Ts("20230101000000")), &a2);
  EXPECT_EQ(PickCandidate({}, Ts("20230101000000")), nullptr);
}

}  // namespace
}  // namespace adreplay::fuzzy
