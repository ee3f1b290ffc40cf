#include "adreplay/adscan/gallery.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "adreplay/adscan/scan_report.h"
#include "adreplay/warc/wacz.h"
#include "adreplay/warc/warc_writer.h"
#include "json.hpp"
#include "testing/ad_urls.h"
#include "testing/fixtures.h"

namespace adreplay::adscan {
namespace {

using testing::MakeResponse;
using testing::TempDir;

std::vector<std::string> ManifestUrls(const nlohmann::json& manifest) {
  std::vector<std::string> urls;
  for (const auto& [type, items] : manifest["groups"].items()) {
    for (const auto& item : items) urls.push_back(item["urir"]);
  }
  return urls;
}

TEST(GalleryTest, FiltersSeedAndInvisibleAssets) {
  TempDir dir;
  const auto fixture = testing::MakeGalleryFixture();
  const auto source = warc::WriteWarc(fixture.records, dir / "data.warc.gz", true);
  const Gallery gallery = BuildGallery(std::span(&source, 1), fixture.seed_url);
  EXPECT_EQ(gallery.seed_key, "ign.com/tv/the-last-of-us-the-series");
  std::vector<std::string> urls;
  for (const auto& item : gallery.items) {
    urls.push_back(item.resource.entry.original_uri);
    EXPECT_NE(item.resource.entry.key, gallery.seed_key);
    EXPECT_TRUE(item.urim.starts_with(std::string(kDefaultGalleryReplayBase)));
    EXPECT_NE(item.urim.find("id_/"), std::string::npos);
  }
  auto expected = fixture.expected_urls;
  std::sort(urls.begin(), urls.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(urls, expected);
  for (size_t i = 1; i < gallery.items.size(); ++i) {
    EXPECT_LE(gallery.items[i - 1].resource.ad_type, gallery.items[i].resource.ad_type);
  }
}

TEST(GalleryTest, WritesManifestAndPages) {
  TempDir dir;
  const auto fixture = testing::MakeGalleryFixture();
  warc::WriteWarc(fixture.records, dir / "data.warc", false);
  const Gallery gallery = EmitGallery(dir / "data.warc", fixture.seed_url, dir / "out");
  const auto manifest = nlohmann::json::parse(testing::ReadFile(dir / "out" / "manifest.json"));
  EXPECT_EQ(manifest["count"], 3);
  EXPECT_EQ(manifest["seed_url"], fixture.seed_url);
  EXPECT_EQ(manifest["groups"]["image"].size(), 2u);
  EXPECT_EQ(manifest["groups"]["video"].size(), 1u);
  EXPECT_EQ(manifest["groups"]["embedded_web_page"].size(), 0u);
  EXPECT_EQ(ManifestUrls(manifest).size(), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "index.html"));
  for (const auto& item : gallery.items) {
    const std::string page = testing::ReadFile(dir / "out" / item.page);
    EXPECT_NE(page.find(item.urim), std::string::npos);
  }
  EXPECT_EQ(GalleryManifestJson(gallery), testing::ReadFile(dir / "out" / "manifest.json"));
}

TEST(GalleryTest, SeedOnlyGivesEmptyManifest) {
  TempDir dir;
  const auto fixture = testing::MakeGalleryFixture();
  const std::vector<warc::CaptureRecord> records = {fixture.records[0], fixture.records[1]};
  warc::WriteWarc(records, dir / "seed.warc", false);
  const Gallery gallery = EmitGallery(dir / "seed.warc", fixture.seed_url, dir / "out");
  EXPECT_TRUE(gallery.items.empty());
  const auto manifest = nlohmann::json::parse(testing::ReadFile(dir / "out" / "manifest.json"));
  EXPECT_EQ(manifest["count"], 0);
}

TEST(GalleryTest, UnreadableWarcThrows) {
  TempDir dir;
  testing::WriteFile(dir / "bad.warc", "garbage that is not a warc\r\n\r\n");
  EXPECT_THROW(EmitGallery(dir / "bad.warc", "https://h.test/", dir / "out"), warc::WarcError);
}

TEST(ScanReportTest, EmptyArchive) {
  TempDir dir;
  warc::WriteWarc({}, dir / "empty.warc", false);
  const ScanReport report = ScanArchive(dir / "empty.warc", SpnBlocklist::Default());
  EXPECT_EQ(report.captures, 0u);
  EXPECT_EQ(report.service_counts.size(), std::size(kAllServices));
  EXPECT_EQ(report.type_counts.size(), std::size(kAllAdTypes));
  for (const auto& [name, count] : report.service_counts) EXPECT_EQ(count, 0u) << name;
  for (const auto& [name, count] : report.type_counts) EXPECT_EQ(count, 0u) << name;
  EXPECT_TRUE(report.verdicts.empty());
}

TEST(ScanReportTest, ServiceCounts) {
  TempDir dir;
  const std::vector<warc::CaptureRecord> records = {
      MakeResponse(testing::kSafeframeUrl, "20230822161544", "text/html", "<p>1</p>"),
      MakeResponse(testing::SafeframeUrlWithLabel(testing::kReplaySafeframeLabels[0]),
                   "20230822161545", "text/html", "<p>2</p>"),
      MakeResponse(testing::kAmazonAdmiUrl, "20230822161546", "text/html", "<p>3</p>"),
      MakeResponse("https://h.test/", "20230822161547", "text/html", "<p>4</p>"),
  };
  warc::WriteWarc(records, dir / "s.warc.gz", true);
  const ScanReport report = ScanArchive(dir / "s.warc.gz", SpnBlocklist::Default());
  EXPECT_EQ(report.captures, 4u);
  EXPECT_EQ(report.service_counts.at("google_safeframe"), 2u);
  EXPECT_EQ(report.service_counts.at("amazon"), 1u);
  EXPECT_EQ(report.service_counts.at("unknown"), 1u);
  EXPECT_EQ(report.service_counts.at("innovid"), 0u);
  EXPECT_EQ(report.type_counts.at("embedded_web_page"), 4u);
  ASSERT_EQ(report.verdicts.size(), 4u);
  EXPECT_TRUE(std::is_sorted(report.verdicts.begin(), report.verdicts.end(),
                             [](const BlockVerdict& a, const BlockVerdict& b) { return a.url < b.url; }));
  const auto blocked = std::count_if(report.verdicts.begin(), report.verdicts.end(),
                                     [](const BlockVerdict& v) { return v.blocked; });
  EXPECT_EQ(blocked, 3);
}

TEST(ScanReportTest, FormatsAndRoundTrip) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  warc::WriteWarc(fixture.records, dir / "f.warc", false);
  const ScanReport report = ScanArchive(dir / "f.warc", SpnBlocklist::Default());
  EXPECT_EQ(report.captures, 7u);
  EXPECT_EQ(ScanReport::FromJson(report.ToJson()), report);
  EXPECT_FALSE(report.ToText().empty());
  try {
    ScanReport::FromJson("{\"captures\": \"many\"}");
    FAIL();
  } catch (const AdScanError& e) {
    EXPECT_EQ(e.kind(), AdScanError::Kind::kBadReport);
  }
}

TEST(ScanReportTest, ReadsWacz) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  warc::WriteWarc(fixture.records, dir / "f.warc.gz", true);
  const std::vector<std::filesystem::path> warcs = {dir / "f.warc.gz"};
  warc::WriteWacz(warcs, dir / "f.wacz");
  EXPECT_EQ(ScanArchive(dir / "f.wacz", SpnBlocklist::Default()),
            ScanArchive(dir / "f.warc.gz", SpnBlocklist::Default()));
}

TEST(ScanReportTest, ParseFailureThrows) {
  TempDir dir;
  testing::WriteFile(dir / "bad.warc", "WARC/1.1\r\nContent-Length: 999\r\n\r\nshort");
  EXPECT_THROW(ScanArchive(dir / "bad.warc", SpnBlocklist::Default()), warc::WarcError);
}

}  // namespace
}  // namespace adreplay::adscan
