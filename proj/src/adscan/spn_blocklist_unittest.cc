#include "adreplay/adscan/spn_blocklist.h"

#include <sstream>

#include <gtest/gtest.h>

#include "adreplay/adscan/classify.h"

namespace adreplay::adscan {
namespace {

struct Expected {
  const char* url;
  bool blocked;
  BlockReason reason;
};

TEST(SpnBlocklistTest, ObservedVerdicts) {
  const SpnBlocklist list = SpnBlocklist::Default();
  const Expected cases[] = {
      {"https://treid003.github.io/imgAd.jpg", true, BlockReason::kAdFileName},
      {"https://treid003.github.io/displayAds.js", true, BlockReason::kAdFileName},
      {"https://treid003.github.io/videoAd.mp4", true, BlockReason::kAdFileName},
      {"https://treid003.github.io/webAd.png", true, BlockReason::kAdFileName},
      {"https://savingads.github.io/no_extension/imgAd", false, BlockReason::kNotBlocked},
      {"https://treid003.github.io/Advertisement_files/Block_Ads_By_Regular_Expression.html", true,
       BlockReason::kAdDirectoryName},
      {"https://treid003.github.io/files/Block_Ads_By_Regular_Expression.html", false,
       BlockReason::kNotBlocked},
      {"https://twitter.com/displayads/status/128664060186214400", true,
       BlockReason::kAdDirectoryName},
  };
  for (const Expected& c : cases) {
    const BlockVerdict v = list.Check(c.url);
    EXPECT_EQ(v.url, c.url);
    EXPECT_EQ(v.blocked, c.blocked) << c.url;
    EXPECT_EQ(v.reason, c.reason) << c.url;
    EXPECT_EQ(v.blocked, v.reason != BlockReason::kNotBlocked);
    EXPECT_EQ(v.blocked, !v.matched_token.empty());
  }
}

TEST(SpnBlocklistTest, CaseInsensitiveTokens) {
  const SpnBlocklist list = SpnBlocklist::Default();
  for (const std::string& token : list.directory_tokens()) {
    std::string lower, upper;
    for (char c : token) {
      lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    const auto a = list.Check("https://x.test/" + lower + "/page.html");
    const auto b = list.Check("https://x.test/" + upper + "/page.html");
    EXPECT_TRUE(a.blocked) << token;
    EXPECT_EQ(a.blocked, b.blocked);
    EXPECT_EQ(a.reason, b.reason);
  }
  EXPECT_EQ(list.Check("https://x.test/DISPLAYADS.JS").reason, BlockReason::kAdFileName);
}

TEST(SpnBlocklistTest, NoExtensionExceptionForEveryFileToken) {
  const SpnBlocklist list = SpnBlocklist::Default();
  for (const std::string& token : list.file_tokens()) {
    EXPECT_FALSE(list.Check("https://x.test/p/" + token).blocked) << token;
    EXPECT_TRUE(list.Check("https://x.test/p/" + token + ".bin").blocked) << token;
  }
}

TEST(SpnBlocklistTest, NearMissesAllowed) {
  const SpnBlocklist list = SpnBlocklist::Default();
  for (const char* url : {"https://x.test/imgAds.jpg", "https://x.test/myimgAd.jpg",
                          "https://x.test/adsense/x.html", "https://x.test/ads",
                          "https://x.test/page.html?dir=ads/x", "https://notdoubleclick.net.test/"}) {
    EXPECT_FALSE(list.Check(url).blocked) << url;
  }
}

TEST(SpnBlocklistTest, AdServiceHosts) {
  const SpnBlocklist list = SpnBlocklist::Default();
  const auto v = list.Check("https://tpc.googlesyndication.com/simgad/123");
  EXPECT_TRUE(v.blocked);
  EXPECT_EQ(v.reason, BlockReason::kAdServiceHost);
  EXPECT_EQ(v.matched_token, "googlesyndication.com");
  EXPECT_TRUE(list.Check("https://doubleclick.net/").blocked);
  EXPECT_TRUE(list.Check("https://aax-us-east.amazon-adsystem.com:443/e/dtb/admi").blocked);
}

TEST(SpnBlocklistTest, RejectsNonHttp) {
  const SpnBlocklist list = SpnBlocklist::Default();
  for (const char* bad : {"imgAd.jpg", "/x/imgAd.jpg", "ftp://x.test/imgAd.jpg"}) {
    try {
      list.Check(bad);
      FAIL() << bad;
    } catch (const AdScanError& e) {
      EXPECT_EQ(e.kind(), AdScanError::Kind::kNotAbsoluteUrl);
    }
  }
}

TEST(SpnBlocklistTest, ParseConfig) {
  std::istringstream in("# extra tokens\nfile bannerAd\ndir promo  # campaign dirs\nhost ads.test\n");
  const SpnBlocklist list = SpnBlocklist::Parse(in);
  EXPECT_TRUE(list.Check("https://x.test/bannerAd.png").blocked);
  EXPECT_TRUE(list.Check("https://x.test/promo/a.html").blocked);
  EXPECT_TRUE(list.Check("https://cdn.ads.test/").blocked);
  EXPECT_FALSE(list.Check("https://x.test/imgAd.jpg").blocked);

  for (const char* bad : {"file\n", "path x\n", "dir a b\n"}) {
    std::istringstream b(bad);
    try {
      SpnBlocklist::Parse(b);
      FAIL() << bad;
    } catch (const AdScanError& e) {
      EXPECT_EQ(e.kind(), AdScanError::Kind::kBadBlocklist);
    }
  }
}

TEST(SpnBlocklistTest, ShippedConfigMatchesDefault) {
  const SpnBlocklist file = SpnBlocklist::LoadFile(ADREPLAY_SOURCE_DIR "/config/spn_blocklist.conf");
  const SpnBlocklist builtin = SpnBlocklist::Default();
  EXPECT_EQ(file.file_tokens(), builtin.file_tokens());
  EXPECT_EQ(file.directory_tokens(), builtin.directory_tokens());
  EXPECT_EQ(file.host_domains(), builtin.host_domains());
}

TEST(BlockReasonTest, Names) {
  for (auto r : {BlockReason::kAdFileName, BlockReason::kAdDirectoryName,
                 BlockReason::kAdServiceHost, BlockReason::kNotBlocked}) {
    EXPECT_EQ(ParseBlockReason(BlockReasonName(r)), r);
  }
  EXPECT_EQ(BlockReasonName(BlockReason::kAdDirectoryName), "ad_directory_name");
}

}  // namespace
}  // namespace adreplay::adscan
