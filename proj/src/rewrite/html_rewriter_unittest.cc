#include "adreplay/rewrite/html_rewriter.h"

#include <random>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include "json.hpp"

#include "adreplay/util/url.h"
#include "testing/oracles.h"

namespace adreplay::rewrite {
namespace {

constexpr std::string_view kTs = "20230822161544";

RewriteContext Ctx(std::string_view base = "https://h.test/d/", bool shim = false,
                   std::string_view replay_base = "/web/") {
  return MakeRewriteContext(base, kTs, replay_base, shim);
}

std::string Shim(const RewriteContext& ctx) { return ShimBlock(ctx); }

TEST(HtmlRewriterTest, ScriptElement) {
  const RewriteContext ctx = Ctx("https://treid003.github.io/", false,
                                 "https://web.archive.org/web/");
  EXPECT_EQ(RewriteHtml("<script src=\"https://treid003.github.io/displayAds.js\"></script>", ctx),
            "<script src=\"https://web.archive.org/web/20230822161544js_/"
            "https://treid003.github.io/displayAds.js\"></script>");
}

TEST(HtmlRewriterTest, ModifiersByElement) {
  const RewriteContext ctx = Ctx();
  EXPECT_EQ(RewriteHtml("<img src=\"a/b.png\">", ctx),
            "<img src=\"/web/20230822161544im_/https://h.test/d/a/b.png\">");
  EXPECT_EQ(RewriteHtml("<iframe src=\"/f.html\"></iframe>", ctx),
            "<iframe src=\"/web/20230822161544if_/https://h.test/f.html\"></iframe>");
  EXPECT_EQ(RewriteHtml("<link rel=\"preload stylesheet\" href=s.css>", ctx),
            "<link rel=\"preload stylesheet\" href=/web/20230822161544cs_/https://h.test/d/s.css>");
  EXPECT_EQ(RewriteHtml("<a href='../x'>x</a>", ctx),
            "<a href='/web/20230822161544/https://h.test/x'>x</a>");
  EXPECT_EQ(RewriteHtml("<form action=\"/post\"></form>", ctx),
            "<form action=\"/web/20230822161544/https://h.test/post\"></form>");
  EXPECT_EQ(RewriteHtml("<video poster=\"p.jpg\"></video>", ctx),
            "<video poster=\"/web/20230822161544/https://h.test/d/p.jpg\"></video>");
  EXPECT_EQ(RewriteHtml("<object data=\"m.swf\"></object>", ctx),
            "<object data=\"/web/20230822161544/https://h.test/d/m.swf\"></object>");
}

TEST(HtmlRewriterTest, RelativeResolutionMatchesReferenceCases) {
  const RewriteContext ctx = Ctx("http://a/b/c/d;p?q");
  for (const auto& c : testing::RfcResolutionCases()) {
    if (c.reference.empty() || c.reference.starts_with("#") || !IsHttpUrl(c.expected)) continue;
    const std::string html = "<img src=\"" + c.reference + "\">";
    EXPECT_EQ(RewriteHtml(html, ctx), "<img src=\"/web/20230822161544im_/" + c.expected + "\">")
        << c.reference;
  }
}

TEST(HtmlRewriterTest, LeavesNonHttpValues) {
  const RewriteContext ctx = Ctx();
  for (const char* html : {
           "<iframe src=\"about:blank\"></iframe>",
           "<a href=\"javascript:void(0)\">x</a>",
           "<img src=\"data:image/gif;base64,R0lGOD\">",
           "<a href=\"#top\">x</a>",
           "<a href=\"mailto:a@b.test\">x</a>",
           "<img src=\"\">",
           "<img src=\"blob:https://h.test/1\">",
       }) {
    EXPECT_EQ(RewriteHtml(html, ctx), html);
  }
}

TEST(HtmlRewriterTest, SrcsetAndStyle) {
  const RewriteContext ctx = Ctx();
  EXPECT_EQ(RewriteHtml("<img srcset=\"a.png 1x, https://c.test/b.png 2x\">", ctx),
            "<img srcset=\"/web/20230822161544im_/https://h.test/d/a.png 1x, "
            "/web/20230822161544im_/https://c.test/b.png 2x\">");
  EXPECT_EQ(RewriteHtml("<div style=\"background:url(bg.png)\"></div>", ctx),
            "<div style=\"background:url(/web/20230822161544im_/https://h.test/d/bg.png)\"></div>");
  EXPECT_EQ(RewriteHtml("<style>a{background:url(x.png)}</style>", ctx),
            "<style>a{background:url(/web/20230822161544im_/https://h.test/d/x.png)}</style>");
}

TEST(HtmlRewriterTest, ScriptBodiesAndCommentsUntouched) {
  const RewriteContext ctx = Ctx();
  const std::string html =
      "<script>var s='<img src=\"https://live.test/x.png\">';</script>"
      "<!-- <img src=\"https://live.test/y.png\"> -->"
      "<textarea><a href=\"https://live.test/\"></textarea>";
  EXPECT_EQ(RewriteHtml(html, ctx), html);
}

TEST(HtmlRewriterTest, BaseElement) {
  const RewriteContext ctx = Ctx();
  EXPECT_EQ(RewriteHtml("<base href=\"https://cdn.test/root/\"><img src=\"i.png\">", ctx),
            "<base href=\"/web/20230822161544/https://cdn.test/root/\">"
            "<img src=\"/web/20230822161544im_/https://cdn.test/root/i.png\">");
}

TEST(HtmlRewriterTest, MetaRefresh) {
  EXPECT_EQ(RewriteHtml("<meta http-equiv=\"refresh\" content=\"0; url=next.html\">", Ctx()),
            "<meta http-equiv=\"refresh\" content=\"0; url=/web/20230822161544/"
            "https://h.test/d/next.html\">");
}

TEST(HtmlRewriterTest, ShimBlockContents) {
  const RewriteContext ctx = Ctx("https://h.test/", true);
  const std::string block = ShimBlock(ctx);
  const std::string prefix = "<script id=\"adreplay-context\" type=\"application/json\">";
  const std::string suffix = "</script><script src=\"/_shim/shim.js\"></script>";
  ASSERT_TRUE(block.starts_with(prefix));
  ASSERT_TRUE(block.ends_with(suffix));
  const auto json = nlohmann::json::parse(
      block.substr(prefix.size(), block.size() - prefix.size() - suffix.size()));
  EXPECT_EQ(json.size(), 3u);
  EXPECT_EQ(json["timestamp14"], "20230822161544");
  EXPECT_EQ(json["wombat_sec"], "1692720944");
  EXPECT_EQ(json["replay_base"], "/web/");
}

TEST(HtmlRewriterTest, ShimIsFirstChildOfHead) {
  const RewriteContext ctx = Ctx("https://h.test/", true);
  const std::string shim = Shim(ctx);
  EXPECT_EQ(RewriteHtml("<!DOCTYPE html><html><HEAD><script>first()</script></HEAD></html>", ctx),
            "<!DOCTYPE html><html><HEAD>" + shim + "<script>first()</script></HEAD></html>");
  EXPECT_EQ(RewriteHtml("<html lang=en><body>x</body></html>", ctx),
            "<html lang=en><head>" + shim + "</head><body>x</body></html>");
  EXPECT_EQ(RewriteHtml("<!doctype html><p>x", ctx), "<!doctype html>" + shim + "<p>x");
  EXPECT_EQ(RewriteHtml("", ctx), shim);
}

TEST(HtmlRewriterTest, ZeroUrlDocumentOnlyGainsShim) {
  const RewriteContext ctx = Ctx("https://h.test/", true);
  const std::string doc = "<html><head><title>t</title></head><body><p>hi</p></body></html>";
  const std::string out = RewriteHtml(doc, ctx);
  const std::string shim = Shim(ctx);
  ASSERT_NE(out.find(shim), std::string::npos);
  std::string without = out;
  without.erase(without.find(shim), shim.size());
  EXPECT_EQ(without, doc);
}

TEST(HtmlRewriterTest, NoShimWhenDisabled) {
  const std::string doc = "<html><head></head><body></body></html>";
  EXPECT_EQ(RewriteHtml(doc, Ctx("https://h.test/", false)), doc);
}

std::string RandomDocument(std::mt19937& rng) {
  static const std::vector<std::string> values = {
      "https://live.test/a.js", "http://ads.test/x?y=1", "rel/p.png", "/abs/q.gif", "../up.css",
      "//proto.test/r.png",     "about:blank",           "#frag",     "data:,x",    "?q=1",
      "HTTPS://UPPER.TEST/",    " https://ws.test/ ",    ""};
  static const std::vector<std::string> tags = {"img src", "script src", "iframe src", "a href",
                                                "link rel=stylesheet href", "form action",
                                                "video poster", "object data", "img srcset",
                                                "div style"};
  std::uniform_int_distribution<size_t> v(0, values.size() - 1), t(0, tags.size() - 1), n(1, 12);
  std::string doc = "<html><head><title>x</title></head><body>";
  for (size_t i = n(rng); i > 0; --i) {
    const std::string tag = tags[t(rng)];
    const std::string element = tag.substr(0, tag.find(' '));
    std::string value = values[v(rng)];
    if (tag.ends_with("srcset")) value += " 1x, " + values[v(rng)] + " 2x";
    if (tag.ends_with("style")) value = "background:url(" + value + ")";
    doc += "<" + tag + "=\"" + value + "\">";
    if (element == "script" || element == "iframe") doc += "</" + element + ">";
  }
  return doc + "</body></html>";
}

// Every absolute http(s) URL in a rewritable position, as written.
std::vector<std::string> UrlPositions(const std::string& html) {
  static const std::regex attr(R"re(\s(src|href|action|poster|data)="\s*([^"]*?)\s*")re",
                               std::regex::icase);
  static const std::regex srcset(R"re(\ssrcset="([^"]*)")re", std::regex::icase);
  static const std::regex css_url(R"re(url\(\s*([^)\s]*))re", std::regex::icase);
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(html.begin(), html.end(), attr); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[2]);
  }
  for (auto it = std::sregex_iterator(html.begin(), html.end(), srcset); it != std::sregex_iterator(); ++it) {
    std::string list = (*it)[1];
    std::istringstream words(list);
    std::string w;
    bool expect_url = true;
    while (words >> w) {
      if (expect_url) out.push_back(w.back() == ',' ? w.substr(0, w.size() - 1) : w);
      expect_url = w.back() == ',';
    }
  }
  for (auto it = std::sregex_iterator(html.begin(), html.end(), css_url); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1]);
  }
  return out;
}

TEST(HtmlRewriterTest, NoLiveUrlsAndIdempotent) {
  std::mt19937 rng(4);
  const RewriteContext ctx = Ctx("https://h.test/d/", true, "https://replay.test/web/");
  for (int i = 0; i < 300; ++i) {
    const std::string doc = RandomDocument(rng);
    const std::string out = RewriteHtml(doc, ctx);
    for (const std::string& url : UrlPositions(out)) {
      if (url == ctx.shim_src) continue;
      const bool live = IsHttpUrl(url) && !url.starts_with(ctx.replay_base);
      const bool relative_live = !url.empty() && url[0] != '#' && !IsAbsoluteUri(url);
      EXPECT_FALSE(live || relative_live) << url << "\nin " << out;
    }
    EXPECT_EQ(RewriteHtml(out, ctx), out) << doc;
  }
}

TEST(CharsetTest, Sniffing) {
  EXPECT_EQ(SniffCharset("<meta charset=\"Windows-1252\">", std::nullopt), "windows-1252");
  EXPECT_EQ(SniffCharset("<meta http-equiv=\"Content-Type\" content=\"text/html; charset=ISO-8859-1\">",
                         std::nullopt),
            "iso-8859-1");
  EXPECT_EQ(SniffCharset("<p>x</p>", "UTF-8"), "utf-8");
  EXPECT_EQ(SniffCharset("\xEF\xBB\xBF<p>", "latin1"), "utf-8");
  EXPECT_FALSE(SniffCharset("<p>x</p>", std::nullopt));
}

TEST(CharsetTest, LossyUtf8) {
  EXPECT_EQ(SanitizeUtf8("ok \xC3\xA9"), "ok \xC3\xA9");
  EXPECT_EQ(SanitizeUtf8("a\xFF" "b"), "a\xEF\xBF\xBD" "b");
  EXPECT_EQ(SanitizeUtf8("\xE2\x82"), "\xEF\xBF\xBD");
  const RewriteContext ctx = Ctx();
  EXPECT_EQ(RewriteHtml("<p>\xFF</p>", ctx), "<p>\xEF\xBF\xBD</p>");
  EXPECT_EQ(RewriteHtml("<meta charset=latin1><p>\xE9</p>", ctx), "<meta charset=latin1><p>\xE9</p>");
}

}  // namespace
}  // namespace adreplay::rewrite
