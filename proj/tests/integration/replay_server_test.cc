#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "adreplay/replay/collection.h"
#include "adreplay/replay/http_server.h"
#include "adreplay/replay/miss_report.h"
#include "adreplay/replay/replay_service.h"
#include "adreplay/warc/warc_writer.h"
#include "json.hpp"
#include "testing/ad_urls.h"
#include "testing/fixtures.h"
#include "testing/raw_http.h"

namespace adreplay {
namespace {

using testing::MakeResponse;
using testing::RawGet;
using testing::RawRequest;

class ReplayServerTest : public ::testing::Test {
 protected:
  void Serve(const std::vector<warc::CaptureRecord>& records, bool gzip = true) {
    auto source = warc::WriteWarc(records, dir_ / "crawl.warc.gz", gzip);
    replay::ServerConfig config;
    config.shim_asset = dir_ / "shim.js";
    testing::WriteFile(*config.shim_asset, "window.__shim = 1;\n");
    service_ = std::make_unique<replay::ReplayService>(
        config, replay::BuildCollection({std::move(source)}));
    server_ = std::make_unique<replay::HttpServer>(*service_);
    port_ = server_->Bind("127.0.0.1", 0);
    server_->Start();
  }

  void TearDown() override {
    if (server_) server_->Stop();
  }

  testing::TempDir dir_;
  std::unique_ptr<replay::ReplayService> service_;
  std::unique_ptr<replay::HttpServer> server_;
  int port_ = 0;
};

TEST_F(ReplayServerTest, BindsAnEphemeralPort) {
  Serve({});
  EXPECT_GT(port_, 0);
  const auto r = RawGet(port_, "/health");
  EXPECT_EQ(r.status, 200);
  const auto json = nlohmann::json::parse(r.body);
  EXPECT_EQ(json["status"], "ok");
  EXPECT_EQ(json["entries"], 0);
}

TEST_F(ReplayServerTest, ServesImageBytesWithLength) {
  const std::string png = testing::MakePng(728, 90);
  Serve({MakeResponse("https://h.test/b.png", "20230822161547", "image/png", png)});
  const auto r = RawGet(port_, "/web/20230822161547im_/https://h.test/b.png");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, png);
  EXPECT_EQ(r.header("Content-Type"), "image/png");
  EXPECT_EQ(r.header("Content-Length"), std::to_string(png.size()));
  EXPECT_EQ(r.header("X-Archive-Rule"), "exact");
}

TEST_F(ReplayServerTest, HtmlCarriesShimAndMatchingLength) {
  Serve({MakeResponse("https://h.test/", "20230822161544", "text/html",
                      "<html><head><title>t</title></head><body>"
                      "<img src=\"/a.png\"><a href=\"https://other.test/x\">x</a></body></html>")});
  const auto r = RawGet(port_, "/web/20230822161544/https://h.test/");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.header("Content-Length"), std::to_string(r.body.size()));
  EXPECT_NE(r.body.find("<script id=\"adreplay-context\" type=\"application/json\">"),
            std::string::npos);
  EXPECT_NE(r.body.find("<script src=\"/_shim/shim.js\"></script>"), std::string::npos);
  EXPECT_NE(r.body.find("src=\"/web/20230822161544im_/https://h.test/a.png\""), std::string::npos);
  EXPECT_NE(r.body.find("href=\"/web/20230822161544/https://other.test/x\""), std::string::npos);

  const auto shim = RawGet(port_, "/_shim/shim.js");
  EXPECT_EQ(shim.status, 200);
  EXPECT_EQ(shim.body, "window.__shim = 1;\n");
  EXPECT_EQ(shim.header("Content-Type"), "application/javascript");
}

TEST_F(ReplayServerTest, RequestTargetBytesArePreserved) {
  const std::string uri = "https://h.test/q?z=%7e&a=1;b=%2F";
  Serve({MakeResponse(uri, "20230822161544", "text/plain", "exact bytes")});
  const auto r = RawGet(port_, "/web/20230822161544id_/" + uri);
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "exact bytes");
  EXPECT_EQ(r.header("X-Archive-Rule"), "exact");
}

TEST_F(ReplayServerTest, SafeframeAndMissOverTheWire) {
  Serve({MakeResponse(std::string(testing::kSafeframeUrl), "20230822161546", "text/html",
                      "<html><body>frame</body></html>")});
  const auto hit = RawGet(port_, "/web/20230822161546if_/" +
                                     testing::SafeframeUrlWithLabel(
                                         testing::kReplaySafeframeLabels[3]));
  EXPECT_EQ(hit.status, 200);
  EXPECT_EQ(hit.header("X-Archive-Rule"), "safeframe");

  const auto miss = RawGet(port_, "/web/20230822161546/https://nowhere.test/ad.js");
  EXPECT_EQ(miss.status, 404);
  EXPECT_EQ(miss.header("Content-Type"), "application/json");
  const auto report = replay::MissReport::FromJson(miss.body);
  EXPECT_EQ(report.requested_urir, "https://nowhere.test/ad.js");
  EXPECT_EQ(report.ts, "20230822161546");
  EXPECT_FALSE(report.rules_tried.empty());
}

TEST_F(ReplayServerTest, RejectsOtherMethods) {
  Serve({});
  const auto r = RawRequest(port_, "POST", "/health", {{"Content-Length", "0"}});
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(r.header("Allow"), "GET, HEAD");
}

TEST_F(ReplayServerTest, SearchOverTheWire) {
  const auto fixture = testing::MakeStandardFixture();
  Serve(fixture.records);
  const auto r = RawGet(port_, "/api/search?prefix=https%3A%2F%2Fs0.2mdn.net%2F&mime=text/html");
  ASSERT_EQ(r.status, 200);
  const auto json = nlohmann::json::parse(r.body);
  ASSERT_EQ(json["rows"].size(), 1u);
  EXPECT_EQ(json["rows"][0]["urir"], fixture.ad_page_url);
}

TEST_F(ReplayServerTest, ConcurrentClientsSeeIdenticalBodies) {
  const auto fixture = testing::MakeStandardFixture();
  Serve(fixture.records);
  const std::string target = "/web/20230822161548/" + fixture.ad_page_url;
  const std::string expected = RawGet(port_, target).body;
  ASSERT_FALSE(expected.empty());
  std::vector<std::future<std::string>> results;
  for (int i = 0; i < 16; ++i) {
    results.push_back(std::async(std::launch::async, [&] { return RawGet(port_, target).body; }));
  }
  for (auto& f : results) EXPECT_EQ(f.get(), expected);
}

TEST(ListenAddressTest, Forms) {
  EXPECT_EQ(replay::ParseListenAddress("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(replay::ParseListenAddress(":9000"), std::make_pair(std::string("127.0.0.1"), 9000));
  EXPECT_EQ(replay::ParseListenAddress("8081"), std::make_pair(std::string("127.0.0.1"), 8081));
  EXPECT_EQ(replay::ParseListenAddress("[::1]:80"), std::make_pair(std::string("::1"), 80));
  EXPECT_THROW(replay::ParseListenAddress("host:"), std::invalid_argument);
  EXPECT_THROW(replay::ParseListenAddress("host:70000"), std::invalid_argument);
  EXPECT_THROW(replay::ParseListenAddress("host:http"), std::invalid_argument);
}

}  // namespace
}  // namespace adreplay
