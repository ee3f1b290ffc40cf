#include "adreplay/adscan/classify.h"

#include <gtest/gtest.h>

#include "adreplay/adscan/image_probe.h"
#include "adreplay/cdx/canonical_url.h"
#include "testing/ad_urls.h"
#include "testing/fixtures.h"

namespace adreplay::adscan {
namespace {

cdx::CdxEntry Entry(std::string_view url, std::string_view mime) {
  cdx::CdxEntry e;
  e.key = cdx::Canonicalize(url).key();
  e.original_uri = std::string(url);
  e.mime = std::string(mime);
  e.status = 200;
  return e;
}

TEST(ClassifyTest, EmbeddedAdPage) {
  const auto fixture = testing::MakeStandardFixture();
  const AdResource r = ClassifyResource(Entry(fixture.ad_page_url, "text/html"));
  EXPECT_EQ(r.service, AdService::kGoogleDisplay);
  EXPECT_EQ(r.ad_type, AdType::kEmbeddedWebPage);
  EXPECT_TRUE(r.visible);
}

TEST(ClassifyTest, HostTable) {
  EXPECT_EQ(ClassifyResource(Entry("https://x.test/logo.png", "image/png")).service,
            AdService::kUnknown);
  EXPECT_EQ(ServiceForHost("securepubads.g.doubleclick.net"), AdService::kGoogleDisplay);
  EXPECT_EQ(ServiceForHost("S0.2MDN.NET:443"), AdService::kGoogleDisplay);
  EXPECT_EQ(ServiceForHost("e76308bcf1c30aa4c853507f4b382285.safeframe.googlesyndication.com"),
            AdService::kGoogleSafeframe);
  EXPECT_EQ(ServiceForHost("aax-us-east.amazon-adsystem.com"), AdService::kAmazon);
  EXPECT_EQ(ServiceForHost("cdn.flashtalking.com"), AdService::kFlashtalking);
  EXPECT_EQ(ServiceForHost("s-static.innovid.com"), AdService::kInnovid);
  EXPECT_EQ(ServiceForHost("evil-amazon-adsystem.com"), AdService::kUnknown);
  EXPECT_EQ(ClassifyResource(Entry(testing::kAmazonAdmiUrl, "text/html")).service,
            AdService::kAmazon);
}

TEST(ClassifyTest, AdTypeFollowsMime) {
  EXPECT_EQ(AdTypeForMime("image/gif"), AdType::kImage);
  EXPECT_EQ(AdTypeForMime("video/mp4"), AdType::kVideo);
  EXPECT_EQ(AdTypeForMime("text/html"), AdType::kEmbeddedWebPage);
  EXPECT_EQ(AdTypeForMime("application/javascript"), AdType::kOther);
  EXPECT_EQ(AdTypeForMime("text/css"), AdType::kOther);
}

TEST(ClassifyTest, TrackingAssets) {
  const AdResource pixel =
      ClassifyResource(Entry("https://h.test/pixel.gif", "image/gif"), ImageSize{1, 1});
  EXPECT_FALSE(pixel.visible);
  EXPECT_FALSE(ClassifyResource(Entry("https://h.test/pixel.gif", "image/gif")).visible);
  EXPECT_FALSE(ClassifyResource(Entry("https://h.test/b.gif", "image/gif"), ImageSize{2, 2}).visible);
  EXPECT_TRUE(ClassifyResource(Entry("https://h.test/b.gif", "image/gif"), ImageSize{2, 3}).visible);
  EXPECT_TRUE(IsTrackingAssetName("https://h.test/a/PIXEL.GIF?x=1"));
  EXPECT_FALSE(IsTrackingAssetName("https://h.test/pixel.gif/page"));
  EXPECT_TRUE(IsTinyImage({1, 1}));
  EXPECT_FALSE(IsTinyImage({300, 250}));
}

TEST(ClassifyTest, TypeConsistentWithMimeOverFixtures) {
  const auto standard = testing::MakeStandardFixture();
  const auto gallery = testing::MakeGalleryFixture();
  std::vector<warc::CaptureRecord> all = standard.records;
  all.insert(all.end(), gallery.records.begin(), gallery.records.end());
  for (const auto& record : all) {
    if (record.record_type != warc::RecordType::kResponse) continue;
    const AdResource r = ClassifyResource(Entry(record.target_uri, record.content_type));
    if (r.ad_type == AdType::kImage) EXPECT_TRUE(r.entry.mime.starts_with("image/"));
    if (r.ad_type == AdType::kVideo) EXPECT_TRUE(r.entry.mime.starts_with("video/"));
    if (r.ad_type == AdType::kEmbeddedWebPage) EXPECT_EQ(r.entry.mime, "text/html");
  }
}

TEST(ClassifyTest, Names) {
  for (AdService s : kAllServices) EXPECT_EQ(ParseServiceName(ServiceName(s)), s);
  for (AdType t : kAllAdTypes) EXPECT_EQ(ParseAdTypeName(AdTypeName(t)), t);
  EXPECT_EQ(ServiceName(AdService::kGoogleSafeframe), "google_safeframe");
  EXPECT_EQ(AdTypeName(AdType::kEmbeddedWebPage), "embedded_web_page");
}

TEST(ImageProbeTest, Formats) {
  EXPECT_EQ(ProbeImageSize(testing::MakeGif(728, 90)), (ImageSize{728, 90}));
  EXPECT_EQ(ProbeImageSize(testing::MakePng(300, 250)), (ImageSize{300, 250}));

  std::string jpeg = "\xFF\xD8";
  jpeg += std::string("\xFF\xE0\x00\x04\x00\x00", 6);
  jpeg += std::string("\xFF\xC0\x00\x11\x08\x01\x2C\x00\xA0", 9);
  EXPECT_EQ(ProbeImageSize(jpeg), (ImageSize{160, 300}));

  std::string webp("RIFF\x00\x00\x00\x00WEBPVP8X", 16);
  webp += std::string("\x0A\x00\x00\x00\x00\x00\x00\x00", 8);
  webp += std::string("\x2B\x01\x00\xF9\x00\x00", 6);
  EXPECT_EQ(ProbeImageSize(std::string_view(webp)), (ImageSize{300, 250}));

  EXPECT_FALSE(ProbeImageSize("not an image"));
  EXPECT_FALSE(ProbeImageSize("GIF89a"));
}

}  // namespace
}  // namespace adreplay::adscan
