#include "adreplay/replay/replay_service.h"

#include <gtest/gtest.h>

#include "adreplay/replay/http_body.h"
#include "adreplay/replay/miss_report.h"
#include "adreplay/rewrite/html_rewriter.h"
#include "adreplay/util/gzip.h"
#include "adreplay/warc/warc_writer.h"
#include "json.hpp"
#include "testing/ad_urls.h"
#include "testing/fixtures.h"

namespace adreplay::replay {
namespace {

using testing::MakeResponse;
using testing::TempDir;

class ReplayServiceTest : public ::testing::Test {
 protected:
  std::shared_ptr<const Collection> Collect(const std::vector<warc::CaptureRecord>& records,
                                            std::string_view name = "c.warc") {
    auto source = warc::WriteWarc(records, dir_ / name, false);
    sources_.push_back(source);
    return BuildCollection(sources_);
  }

  ReplayService Service(std::shared_ptr<const Collection> collection, bool shim = true) {
    ServerConfig config;
    config.inject_shim = shim;
    return ReplayService(config, std::move(collection));
  }

  static HttpResponse Get(const ReplayService& service, std::string target,
                          warc::HeaderList headers = {}) {
    return service.Handle(HttpRequest{"GET", std::move(target), std::move(headers)});
  }

  TempDir dir_;
  std::vector<warc::ArchiveSource> sources_;
};

TEST_F(ReplayServiceTest, ImagePassthrough) {
  const std::string png = testing::MakePng(300, 250);
  const auto service = Service(Collect({MakeResponse("https://h.test/b.png", "20230822161547",
                                                     "image/png", png)}));
  const HttpResponse r = Get(service, "/web/20230822161547im_/https://h.test/b.png");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.header("Content-Type"), "image/png");
  EXPECT_EQ(r.body, png);
  EXPECT_EQ(r.header("X-Archive-Rule"), "exact");
  EXPECT_EQ(r.header("Memento-Datetime"), "Tue, 22 Aug 2023 16:15:47 GMT");
  EXPECT_FALSE(r.header("Content-Length"));
}

TEST_F(ReplayServiceTest, HtmlIsRewrittenWithShim) {
  const auto service = Service(Collect({MakeResponse(
      "https://h.test/", "20230822161544", "text/html; charset=utf-8",
      "<html><head></head><body><img src=\"a.png\"></body></html>")}));
  const HttpResponse r = Get(service, "/web/20230822161544/https://h.test/");
  EXPECT_EQ(r.status, 200);
  rewrite::RewriteContext ctx =
      rewrite::MakeRewriteContext("https://h.test/", "20230822161544", "/web/", true);
  EXPECT_EQ(r.body, "<html><head>" + rewrite::ShimBlock(ctx) +
                        "</head><body><img src=\"/web/20230822161544im_/https://h.test/a.png\">"
                        "</body></html>");
}

TEST_F(ReplayServiceTest, NoShimFlag) {
  const auto service =
      Service(Collect({MakeResponse("https://h.test/", "20230822161544", "text/html",
                                    "<html><head></head></html>")}),
              false);
  EXPECT_EQ(Get(service, "/web/20230822161544/https://h.test/").body, "<html><head></head></html>");
}

TEST_F(ReplayServiceTest, IdentityModifierServesRawBytes) {
  const std::string html = "<html><head></head><img src=\"https://live.test/x.png\"></html>";
  const auto service =
      Service(Collect({MakeResponse("https://h.test/", "20230822161544", "text/html", html)}));
  EXPECT_EQ(Get(service, "/web/20230822161544id_/https://h.test/").body, html);
}

TEST_F(ReplayServiceTest, DropsSecurityAndHopHeaders) {
  auto record = MakeResponse("https://h.test/", "20230822161544", "text/html", "<p>x</p>");
  record.http_headers.emplace_back("Content-Security-Policy", "script-src 'none'");
  record.http_headers.emplace_back("Connection", "keep-alive");
  record.http_headers.emplace_back("X-Custom", "kept");
  const auto service = Service(Collect({record}));
  const HttpResponse r = Get(service, "/web/20230822161544/https://h.test/");
  EXPECT_FALSE(r.header("Content-Security-Policy"));
  EXPECT_FALSE(r.header("Connection"));
  EXPECT_EQ(r.header("X-Custom"), "kept");
}

TEST_F(ReplayServiceTest, DecodesCompressedHtmlBeforeRewriting) {
  auto record = MakeResponse("https://h.test/", "20230822161544", "text/html", "");
  const std::string html = "<img src=\"/a.png\">";
  record.payload = warc::Payload(GzipCompress(html));
  record.http_headers = {{"Content-Type", "text/html"}, {"Content-Encoding", "gzip"}};
  const auto service = Service(Collect({record}), false);
  const HttpResponse r = Get(service, "/web/20230822161544/https://h.test/");
  EXPECT_EQ(r.body, "<img src=\"/web/20230822161544im_/https://h.test/a.png\">");
  EXPECT_FALSE(r.header("Content-Encoding"));
}

TEST_F(ReplayServiceTest, ChunkedPayload) {
  auto record = MakeResponse("https://h.test/t.txt", "20230822161544", "text/plain", "");
  record.payload = warc::Payload(std::string("5\r\nhello\r\n6\r\n world\r\n0\r\n\r\n"));
  record.http_headers = {{"Content-Type", "text/plain"}, {"Transfer-Encoding", "chunked"}};
  const auto service = Service(Collect({record}));
  const HttpResponse r = Get(service, "/web/20230822161544/https://h.test/t.txt");
  EXPECT_EQ(r.body, "hello world");
  EXPECT_FALSE(r.header("Transfer-Encoding"));
}

TEST_F(ReplayServiceTest, RedirectLocationIsRewritten) {
  auto record = MakeResponse("https://h.test/old", "20230822161544", "text/html", "", 301);
  record.http_headers.emplace_back("Location", "/new");
  const auto service = Service(Collect({record}));
  const HttpResponse r = Get(service, "/web/20230822161544/https://h.test/old");
  EXPECT_EQ(r.status, 301);
  EXPECT_EQ(r.header("Location"), "/web/20230822161544/https://h.test/new");
}

TEST_F(ReplayServiceTest, RangesOnRawOnly) {
  const std::string video(1000, 'v');
  const auto service = Service(Collect({MakeResponse("https://s-static.innovid.com/ad.mp4",
                                                     "20230822161544", "video/mp4", video)}));
  const HttpResponse partial = Get(service, "/web/20230822161544id_/https://s-static.innovid.com/ad.mp4",
                                   {{"Range", "bytes=10-19"}});
  EXPECT_EQ(partial.status, 206);
  EXPECT_EQ(partial.body, video.substr(10, 10));
  EXPECT_EQ(partial.header("Content-Range"), "bytes 10-19/1000");

  const HttpResponse bad = Get(service, "/web/20230822161544id_/https://s-static.innovid.com/ad.mp4",
                               {{"Range", "bytes=5000-"}});
  EXPECT_EQ(bad.status, 416);

  const HttpResponse full = Get(service, "/web/20230822161544/https://s-static.innovid.com/ad.mp4",
                                {{"Range", "bytes=10-19"}});
  EXPECT_EQ(full.status, 200);
  EXPECT_EQ(full.body, video);
}

TEST_F(ReplayServiceTest, SafeframeNovelSubdomain) {
  const auto service = Service(Collect({MakeResponse(testing::kSafeframeUrl, "20230822161544",
                                                     "text/html", "<p>frame</p>")}));
  const HttpResponse r =
      Get(service, "/web/20230822161544if_/" +
                       testing::SafeframeUrlWithLabel(testing::kReplaySafeframeLabels[0]));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.header("X-Archive-Rule"), "safeframe");
}

TEST_F(ReplayServiceTest, RichloadUsesRefererUriM) {
  const auto service = Service(Collect(
      {MakeResponse(testing::kRichloadCapture, "20230207000000", "text/html", "<p>ad</p>")}));
  const std::string target = "/web/20230207000000if_/" + std::string(testing::kRichloadRequest);
  const std::string referer = "http://127.0.0.1:8080/web/20230207000000if_/" +
                              std::string(testing::kRichloadReferrer);
  const HttpResponse hit = Get(service, target, {{"Referer", referer}});
  EXPECT_EQ(hit.status, 200);
  EXPECT_EQ(hit.header("X-Archive-Rule"), "richload");
  EXPECT_EQ(Get(service, target).status, 404);
}

TEST_F(ReplayServiceTest, MissReport) {
  const auto service = Service(Collect({MakeResponse("https://h.test/a", "20230822161544",
                                                     "text/plain", "a"),
                                        MakeResponse("https://h.test/b", "20230822161544",
                                                     "text/plain", "b")}));
  const HttpResponse r = Get(service, "/web/20230822161544/https://unarchived.test/x?q=1");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.header("Content-Type"), "application/json");
  const MissReport report = MissReport::FromJson(r.body);
  EXPECT_EQ(report.requested_urir, "https://unarchived.test/x?q=1");
  EXPECT_EQ(report.ts, "20230822161544");
  ASSERT_EQ(report.rules_tried.size(), 5u);
  EXPECT_EQ(report.rules_tried[0].rule, "exact");
  EXPECT_EQ(report.rules_tried[4].rule, "generic");
  EXPECT_EQ(report.nearest_keys, (std::vector<std::string>{"h.test/a", "h.test/b"}));

  const auto json = nlohmann::json::parse(r.body);
  for (const char* field : {"requested_urir", "ts", "rules_tried", "nearest_keys"}) {
    EXPECT_TRUE(json.contains(field)) << field;
  }
}

TEST_F(ReplayServiceTest, BadUriMs) {
  const auto service = Service(Collect({}));
  const auto error = [&](const std::string& target) {
    const HttpResponse r = Get(service, target);
    EXPECT_EQ(r.status, 400) << target;
    return nlohmann::json::parse(r.body)["error"].get<std::string>();
  };
  EXPECT_EQ(error("/web/2023/https://h.test/"), "InvalidTimestamp");
  EXPECT_EQ(error("/web/latest/https://h.test/"), "NotAUriM");
  EXPECT_EQ(error("/web/20230101000000zz_/https://h.test/"), "UnknownModifier");
  EXPECT_EQ(error("/web/20230101000000/relative/path"), "RelativeUrir");
  EXPECT_EQ(error("/web/20230101000000/ftp://h.test/"), "NotAUriM");
}

TEST_F(ReplayServiceTest, CollapsedSchemeSlashes) {
  const auto service = Service(Collect({MakeResponse("https://h.test/a", "20230822161544",
                                                     "text/plain", "a")}));
  EXPECT_EQ(Get(service, "/web/20230822161544/https:/h.test/a").status, 200);
}

TEST_F(ReplayServiceTest, SearchEndpoint) {
  const auto fixture = testing::MakeStandardFixture();
  const auto collection = Collect(fixture.records);
  const auto service = Service(collection);
  const HttpResponse r = Get(service, "/api/search?prefix=https%3A%2F%2Fs0.2mdn.net%2F&mime=text/html");
  EXPECT_EQ(r.status, 200);
  const auto json = nlohmann::json::parse(r.body);
  ASSERT_EQ(json["rows"].size(), 1u);
  EXPECT_EQ(json["rows"][0]["urir"], fixture.ad_page_url);
  EXPECT_EQ(json["rows"][0]["timestamp14"], "20230822161548");
  EXPECT_EQ(json["rows"][0]["mime"], "text/html");
  EXPECT_EQ(json["rows"][0]["status"], 200);

  const auto empty = nlohmann::json::parse(Get(service, "/api/search?prefix=https://none.test/").body);
  EXPECT_TRUE(empty["rows"].empty());
  EXPECT_EQ(Get(service, "/api/search").status, 400);
  EXPECT_EQ(Get(service, "/api/search?mime=text/html").status, 400);

  for (const std::string prefix : {"https://h.test/", "https://s0.2mdn.net", "https://tpc.googlesyndication.com"}) {
    for (const std::string mime : {"", "image/jpeg", "text/html"}) {
      const auto rows = nlohmann::json::parse(
          Get(service, "/api/search?prefix=" + prefix + (mime.empty() ? "" : "&mime=" + mime)).body)["rows"];
      const auto expected = cdx::PrefixSearch(
          *collection->index, prefix,
          mime.empty() ? std::nullopt : std::optional<std::string_view>(mime));
      ASSERT_EQ(rows.size(), expected.size()) << prefix << " " << mime;
      for (size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(rows[i]["urir"], expected[i].original_uri);
        EXPECT_EQ(rows[i]["timestamp14"], expected[i].timestamp.text());
      }
    }
  }
}

TEST_F(ReplayServiceTest, HealthAndReload) {
  ReplayService service = Service(BuildCollection({}));
  auto health = nlohmann::json::parse(Get(service, "/health").body);
  EXPECT_EQ(health["entries"], 0);
  EXPECT_EQ(health["sources"], 0);

  const auto fixture = testing::MakeStandardFixture();
  service.Reload(Collect(fixture.records, "one.warc"));
  health = nlohmann::json::parse(Get(service, "/health").body);
  EXPECT_EQ(health["entries"], 7);
  EXPECT_EQ(health["sources"], 1);

  const auto old_snapshot = service.snapshot();
  service.Reload(Collect({MakeResponse("https://z.test/", "20230101000000", "text/plain", "z")},
                         "two.warc"));
  health = nlohmann::json::parse(Get(service, "/health").body);
  EXPECT_EQ(health["entries"], 8);
  EXPECT_EQ(health["sources"], 2);
  EXPECT_EQ(old_snapshot->index->size(), 7u);
}

TEST_F(ReplayServiceTest, ShimAssetAndRouting) {
  ServerConfig config;
  ReplayService without(config, BuildCollection({}));
  EXPECT_EQ(Get(without, "/_shim/shim.js").status, 404);

  testing::WriteFile(dir_ / "shim.js", "/* shim */");
  config.shim_asset = dir_ / "shim.js";
  ReplayService with(config, BuildCollection({}));
  const HttpResponse shim = Get(with, "/_shim/shim.js");
  EXPECT_EQ(shim.status, 200);
  EXPECT_EQ(shim.body, "/* shim */");
  EXPECT_NE(shim.header("Content-Type")->find("javascript"), std::string::npos);

  EXPECT_EQ(Get(with, "/elsewhere").status, 404);
  EXPECT_EQ(with.Handle(HttpRequest{"POST", "/health", {}}).status, 405);
}

TEST_F(ReplayServiceTest, DeterministicBodies) {
  const auto fixture = testing::MakeStandardFixture();
  const auto service = Service(Collect(fixture.records));
  for (const auto& record : fixture.records) {
    if (record.record_type != warc::RecordType::kResponse) continue;
    const std::string target = "/web/20230822161600/" + record.target_uri;
    const HttpResponse a = Get(service, target);
    const HttpResponse b = Get(service, target);
    EXPECT_EQ(a.status, 200);
    EXPECT_EQ(a.body, b.body);
    EXPECT_EQ(a.header("Memento-Datetime"), FormatHttpDate(record.warc_date));
  }
}

TEST(ServerConfigTest, Validate) {
  ServerConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.replay_base = "";
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config.replay_base = "/web";
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

TEST(RefererTest, Forms) {
  EXPECT_EQ(RefererToUrir("http://127.0.0.1:8080/web/20230101000000/https://a.test/p", "/web/"),
            "https://a.test/p");
  EXPECT_EQ(RefererToUrir("/web/20230101000000if_/https://a.test/p?x=1", "/web/"),
            "https://a.test/p?x=1");
  EXPECT_EQ(RefererToUrir("https://live.test/page", "/web/"), "https://live.test/page");
  EXPECT_FALSE(RefererToUrir("", "/web/"));
  EXPECT_FALSE(RefererToUrir("not a url", "/web/"));
}

TEST(MissReportTest, JsonRoundTrip) {
  MissReport report{"https://x.test/", "20230101000000",
                    {{"exact", 0}, {"generic", 2}}, {"a.test/", "b.test/"}};
  EXPECT_EQ(MissReport::FromJson(report.ToJson()), report);
  EXPECT_THROW(MissReport::FromJson("{}"), std::invalid_argument);
  EXPECT_THROW(MissReport::FromJson("not json"), std::invalid_argument);
}

TEST(MissReportTest, NearestKeys) {
  std::vector<cdx::CdxEntry> entries;
  for (const char* key : {"a/", "b/", "c/", "d/", "e/", "f/", "g/", "h/"}) {
    cdx::CdxEntry e;
    e.key = key;
    e.digest = key;
    entries.push_back(e);
    entries.push_back(e);
  }
  const cdx::CaptureIndex index(entries);
  EXPECT_EQ(NearestKeys(index, "d0/"), (std::vector<std::string>{"c/", "d/", "e/", "f/", "g/"}));
  EXPECT_EQ(NearestKeys(index, "a/").size(), kMaxNearestKeys);
  EXPECT_TRUE(NearestKeys(cdx::CaptureIndex(), "a/").empty());
}

TEST(HttpBodyTest, Dechunk) {
  EXPECT_EQ(Dechunk("4;ext=1\r\nWiki\r\n0\r\nTrailer: x\r\n\r\n"), "Wiki");
  EXPECT_FALSE(Dechunk("zz\r\nWiki\r\n0\r\n\r\n"));
  EXPECT_FALSE(Dechunk("10\r\nshort\r\n"));
}

TEST(HttpBodyTest, ContentEncoding) {
  EXPECT_EQ(DecodeContentEncoding(GzipCompress("abc"), "gzip"), "abc");
  EXPECT_EQ(DecodeContentEncoding(GzipCompress("abc"), "x-gzip"), "abc");
  EXPECT_EQ(DecodeContentEncoding(DeflateRaw("abc"), "deflate"), "abc");
  EXPECT_EQ(DecodeContentEncoding("abc", "identity"), "abc");
  EXPECT_FALSE(DecodeContentEncoding("abc", "br"));
  EXPECT_FALSE(DecodeContentEncoding("not gzip", "gzip"));
}

TEST(HttpBodyTest, Ranges) {
  RangeSpec spec;
  EXPECT_EQ(ParseRange("bytes=0-9", 100, &spec), RangeResult::kSatisfiable);
  EXPECT_EQ(spec, (RangeSpec{0, 9}));
  EXPECT_EQ(ParseRange("bytes=90-", 100, &spec), RangeResult::kSatisfiable);
  EXPECT_EQ(spec, (RangeSpec{90, 99}));
  EXPECT_EQ(ParseRange("bytes=-5", 100, &spec), RangeResult::kSatisfiable);
  EXPECT_EQ(spec, (RangeSpec{95, 99}));
  EXPECT_EQ(ParseRange("bytes=50-500", 100, &spec), RangeResult::kSatisfiable);
  EXPECT_EQ(spec, (RangeSpec{50, 99}));
  EXPECT_EQ(ParseRange("bytes=100-", 100, &spec), RangeResult::kUnsatisfiable);
  EXPECT_EQ(ParseRange("bytes=0-1,5-6", 100, &spec), RangeResult::kNone);
  EXPECT_EQ(ParseRange("items=0-1", 100, &spec), RangeResult::kNone);
  EXPECT_EQ(ParseRange("bytes=9-2", 100, &spec), RangeResult::kNone);
}

}  // namespace
}  // namespace adreplay::replay
