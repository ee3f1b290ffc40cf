#include "adreplay/util/url.h"

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace adreplay {
namespace {

TEST(SplitUriReferenceTest, DistinguishesEmptyFromAbsent) {
  const UriReference a = SplitUriReference("http://h/?");
  ASSERT_TRUE(a.query.has_value());
  EXPECT_EQ(*a.query, "");
  EXPECT_FALSE(a.fragment.has_value());

  const UriReference b = SplitUriReference("http://h/");
  EXPECT_FALSE(b.query.has_value());
  EXPECT_EQ(b.ToString(), "http://h/");
  EXPECT_EQ(a.ToString(), "http://h/?");
}

TEST(SplitUriReferenceTest, Components) {
  const UriReference r = SplitUriReference("https://user@h.test:8080/a/b?x=1#frag");
  EXPECT_EQ(r.scheme, "https");
  EXPECT_EQ(r.authority, "user@h.test:8080");
  EXPECT_EQ(r.path, "/a/b");
  EXPECT_EQ(r.query, "x=1");
  EXPECT_EQ(r.fragment, "frag");

  const Authority auth = SplitAuthority(*r.authority);
  EXPECT_EQ(auth.userinfo, "user");
  EXPECT_EQ(auth.host, "h.test");
  EXPECT_EQ(auth.port, "8080");
}

TEST(ResolveReferenceTest, MatchesReferenceExamples) {
  for (const auto& c : testing::RfcResolutionCases()) {
    EXPECT_EQ(ResolveReference("http://a/b/c/d;p?q", c.reference), c.expected)
        << "reference '" << c.reference << "'";
  }
}

TEST(ResolveReferenceTest, RelativeImageUnderDirectory) {
  EXPECT_EQ(ResolveReference("https://h.test/d/", "a/b.png"), "https://h.test/d/a/b.png");
}

TEST(RemoveDotSegmentsTest, Basic) {
  EXPECT_EQ(RemoveDotSegments("/a/b/c/./../../g"), "/a/g");
  EXPECT_EQ(RemoveDotSegments("mid/content=5/../6"), "mid/6");
}

TEST(UrlPredicatesTest, AbsoluteAndHttp) {
  EXPECT_TRUE(IsAbsoluteUri("https://x.test/"));
  EXPECT_TRUE(IsAbsoluteUri("mailto:a@b"));
  EXPECT_FALSE(IsAbsoluteUri("/relative"));
  EXPECT_FALSE(IsAbsoluteUri("a/b"));
  EXPECT_TRUE(IsHttpUrl("http://x.test"));
  EXPECT_TRUE(IsHttpUrl("HTTPS://X.TEST/a"));
  EXPECT_FALSE(IsHttpUrl("ftp://x.test/"));
  EXPECT_FALSE(IsHttpUrl("http:///nohost"));
  EXPECT_FALSE(IsHttpUrl("about:blank"));
}

}  // namespace
}  // namespace adreplay
