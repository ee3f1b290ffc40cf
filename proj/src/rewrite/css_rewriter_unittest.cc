#include "adreplay/rewrite/css_rewriter.h"

#include <fstream>

#include <gtest/gtest.h>

namespace adreplay::rewrite {
namespace {

struct CssCase {
  std::string in;
  std::string out;
};

std::vector<CssCase> LoadCases() {
  std::ifstream file(ADREPLAY_FIXTURE_DIR "/css_rewrite_cases.txt");
  std::vector<CssCase> cases;
  std::string line;
  const auto payload = [](const std::string& l, size_t tag) {
    return l.size() > tag ? l.substr(tag + 1) : std::string();
  };
  while (std::getline(file, line)) {
    if (line.starts_with("in:")) {
      cases.push_back({payload(line, 3), ""});
    } else if (line.starts_with("out:")) {
      cases.back().out = payload(line, 4);
    }
  }
  return cases;
}

RewriteContext Ctx() {
  return MakeRewriteContext("https://h.test/css/main.css", "20230822161544", "/web/");
}

TEST(CssRewriterTest, HandResolvedCorpus) {
  const auto cases = LoadCases();
  ASSERT_GE(cases.size(), 20u);
  for (const auto& c : cases) {
    EXPECT_EQ(RewriteCss(c.in, Ctx()), c.out) << "input: " << c.in;
  }
}

TEST(CssRewriterTest, Idempotent) {
  for (const auto& c : LoadCases()) {
    const std::string once = RewriteCss(c.in, Ctx());
    EXPECT_EQ(RewriteCss(once, Ctx()), once);
  }
}

TEST(CssRewriterTest, SimpleForms) {
  EXPECT_EQ(RewriteCss("", Ctx()), "");
  RewriteContext ctx = MakeRewriteContext("https://h.test/", "20230822161544", "/web/");
  EXPECT_EQ(RewriteCss("url(\"x.png\")", ctx), "url(\"/web/20230822161544im_/https://h.test/x.png\")");
}

TEST(CssRewriterTest, ExplicitBase) {
  EXPECT_EQ(RewriteCss("b{background:url(i.png)}", "https://o.test/a/", Ctx()),
            "b{background:url(/web/20230822161544im_/https://o.test/a/i.png)}");
}

}  // namespace
}  // namespace adreplay::rewrite
