#include "adreplay/cdx/canonical_url.h"

#include <random>

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace adreplay::cdx {
namespace {

TEST(CanonicalizeTest, Examples) {
  EXPECT_EQ(Canonicalize("https://www.google.com/").key(), "google.com/");
  EXPECT_EQ(Canonicalize("https://google.com/").key(), "google.com/");
  EXPECT_EQ(Canonicalize("https://Example.com:443/a?b=2&a=1#frag").key(), "example.com/a?a=1&b=2");
}

TEST(CanonicalizeTest, NormalizedAspects) {
  EXPECT_EQ(Canonicalize("http://h.test").key(), "h.test/");
  EXPECT_EQ(Canonicalize("http://h.test:80/x").key(), "h.test/x");
  EXPECT_EQ(Canonicalize("https://h.test:8443/x").key(), "h.test:8443/x");
  EXPECT_EQ(Canonicalize("http://h.test/x?").key(), "h.test/x");
  EXPECT_EQ(Canonicalize("http://h.test/%7euser/%2f?q=%41").key(), "h.test/~user/%2F?q=A");
  EXPECT_EQ(Canonicalize("http://www.com/").key(), "www.com/");
  EXPECT_EQ(Canonicalize("http://h.test/p?a=2&a=1&b").key(), "h.test/p?a=1&a=2&b");
}

TEST(CanonicalizeTest, Parts) {
  const CanonicalUrl c = Canonicalize("https://h.test:81/a/b?z=1");
  EXPECT_EQ(c.host(), "h.test:81");
  EXPECT_EQ(c.path(), "/a/b");
  EXPECT_EQ(c.query(), "z=1");
  const KeyParts parts = SplitKey(c.key());
  EXPECT_EQ(parts.host, "h.test:81");
  EXPECT_EQ(parts.path, "/a/b");
  EXPECT_EQ(parts.query, "z=1");
}

TEST(CanonicalizeTest, RejectsNonHttp) {
  for (const char* bad : {"", "/relative", "ftp://h.test/", "about:blank", "http://"}) {
    try {
      Canonicalize(bad);
      FAIL() << bad;
    } catch (const CdxError& e) {
      EXPECT_EQ(e.kind(), CdxError::Kind::kNotAbsoluteUrl);
    }
  }
}

std::string RandomUrl(std::mt19937& rng) {
  static const std::vector<std::string> hosts = {"www.ex.test", "EX.test", "a.b.test", "www.x.y.test",
                                                 "h.test:8080"};
  static const std::vector<std::string> segs = {"a", "B", "%7Ec", "d%2f", "e.html", "x%41y", "",
                                                "%7e"};
  static const std::vector<std::string> params = {"a=1", "b=2", "a=0", "rnd=9", "z", "c=%7e",
                                                  "q=%2F", "m=x%20y"};
  std::uniform_int_distribution<size_t> h(0, hosts.size() - 1), s(0, segs.size() - 1),
      p(0, params.size() - 1), n(0, 3), scheme(0, 1);
  std::string url = scheme(rng) ? "https://" : "http://";
  const std::string& host = hosts[h(rng)];
  url += host;
  if (scheme(rng) && host.find(':') == std::string::npos) url += url.starts_with("https") ? ":443" : ":80";
  for (size_t i = n(rng); i > 0; --i) url += "/" + segs[s(rng)];
  if (size_t k = n(rng); k > 0) {
    url += "?";
    for (size_t i = 0; i < k; ++i) url += (i ? "&" : "") + params[p(rng)];
  }
  if (scheme(rng)) url += "#frag";
  return url;
}

TEST(CanonicalizeTest, AgreesWithReferenceAndIsIdempotent) {
  std::mt19937 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const std::string url = RandomUrl(rng);
    const std::string key = Canonicalize(url).key();
    EXPECT_EQ(key, testing::ReferenceCanonicalize(url)) << url;
    EXPECT_EQ(Canonicalize(key).key(), key) << url;
  }
}

TEST(CanonicalizePrefixTest, Forms) {
  EXPECT_EQ(CanonicalizePrefix("https://s0.2mdn.net/"), "s0.2mdn.net/");
  EXPECT_EQ(CanonicalizePrefix("https://s0.2mdn.net/*"), "s0.2mdn.net/");
  EXPECT_EQ(CanonicalizePrefix("https://cdn.flashtalking.com"), "cdn.flashtalking.com");
  EXPECT_EQ(CanonicalizePrefix("https://www.ign.com/tv/"), "ign.com/tv/");
}

}  // namespace
}  // namespace adreplay::cdx
