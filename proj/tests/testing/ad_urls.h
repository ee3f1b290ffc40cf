#ifndef ADREPLAY_TESTS_TESTING_AD_URLS_H_
#define ADREPLAY_TESTS_TESTING_AD_URLS_H_

// Ad URLs observed on archived pages, used across tests.

#include <array>
#include <string>
#include <string_view>

namespace adreplay::testing {

inline constexpr std::string_view kSafeframeUrl =
    "https://e76308bcf1c30aa4c853507f4b382285.safeframe.googlesyndication.com/safeframe/1-0-40/"
    "html/container.html";
inline constexpr std::string_view kSafeframePath = "/safeframe/1-0-40/html/container.html";

// Subdomains produced by ten replays of one page.
inline constexpr std::array<std::string_view, 10> kReplaySafeframeLabels = {
    "af393d3d232450caab92d97eaefb484e", "36dc52191b8e81186b187c938af4b280",
    "5f68c90c97e25bf663f52ef786eb49b8", "f663f52ef786eb49b8d803369fd0abea",
    "6d18ef14a03123734d453dee25a8be6e", "7a9317739c43b98082f4e77ed17fe3fa",
    "4f8332dc6d18ef14a03123734d453dee", "5bf663f52ef786eb49b8d803369fd0ab",
    "227cd10c62e4b3ea26c2bd42e587e2c5", "173e9e9bad424f8332dc6d18ef14a031",
};

inline std::string SafeframeUrlWithLabel(std::string_view label) {
  return "https://" + std::string(label) + ".safeframe.googlesyndication.com" +
         std::string(kSafeframePath);
}

inline constexpr std::string_view kAmazonAdmiUrl =
    "https://aax-us-east.amazon-adsystem.com/e/dtb/admi?b=JEs-gAH7EaH2UKbdDLn5qMwAAAGGLy2RRQEAAAxWAQB"
    "hcHNfdHhuX2JpZDEgICBOL0EgICAgICAgICAgICCW8VTU&rnd=4734766067051675828791974&pp=q44zcw&p=1kaetq8"
    "&crid=lm7xjkp3";
inline constexpr std::string_view kAmazonRnd = "4734766067051675828791974";

inline std::string AmazonAdmiUrlWithRnd(std::string_view rnd) {
  std::string url(kAmazonAdmiUrl);
  url.replace(url.find(kAmazonRnd), kAmazonRnd.size(), rnd);
  return url;
}

inline constexpr std::string_view kRichloadCapture =
    "https://cdn.flashtalking.com/173980/300x600_Master_Richload_Compressed/index.html";
inline constexpr std::string_view kRichloadRequest =
    "https://cdn.flashtalking.com/richLoads/300x600_Master_Richload/index.html";
inline constexpr std::string_view kRichloadReferrer =
    "https://cdn.flashtalking.com/173980/4163777/index.html";

}  // namespace adreplay::testing

#endif  // ADREPLAY_TESTS_TESTING_AD_URLS_H_
