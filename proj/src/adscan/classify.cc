#include "adreplay/adscan/classify.h"

#include <array>

#include "adreplay/cdx/canonical_url.h"
#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"

namespace adreplay::adscan {

namespace {

constexpr std::array<std::string_view, 14> kTrackingNames = {
    "pixel.gif",   "pixel.png",       "pixel.jpg",       "pixel.webp",
    "1x1.gif",     "1x1.png",         "spacer.gif",      "blank.gif",
    "clear.gif",   "transparent.gif", "transparent.png", "trans.gif",
    "pixel_1x1.gif", "tracking.gif",
};

bool HasSubdomainOf(std::string_view host, std::string_view domain) {
  return host.size() > domain.size() + 1 && host.ends_with(domain) &&
         host[host.size() - domain.size() - 1] == '.';
}

std::string HostOnly(std::string_view host) {
  std::string h = AsciiLower(host);
  if (!h.starts_with("[")) h = h.substr(0, h.find(':'));
  return h;
}

}  // namespace

std::string_view ServiceName(AdService service) {
  switch (service) {
    case AdService::kGoogleDisplay: return "google_display";
    case AdService::kGoogleSafeframe: return "google_safeframe";
    case AdService::kAmazon: return "amazon";
    case AdService::kFlashtalking: return "flashtalking";
    case AdService::kInnovid: return "innovid";
    case AdService::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<AdService> ParseServiceName(std::string_view name) {
  for (AdService s : kAllServices) {
    if (ServiceName(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view AdTypeName(AdType type) {
  switch (type) {
    case AdType::kImage: return "image";
    case AdType::kVideo: return "video";
    case AdType::kEmbeddedWebPage: return "embedded_web_page";
    case AdType::kOther: return "other";
  }
  return "other";
}

std::optional<AdType> ParseAdTypeName(std::string_view name) {
  for (AdType t : kAllAdTypes) {
    if (AdTypeName(t) == name) return t;
  }
  return std::nullopt;
}

AdService ServiceForHost(std::string_view raw_host) {
  const std::string host = HostOnly(raw_host);
  if (HasSubdomainOf(host, "safeframe.googlesyndication.com")) return AdService::kGoogleSafeframe;
  if (host == "s0.2mdn.net" || host == "securepubads.g.doubleclick.net") {
    return AdService::kGoogleDisplay;
  }
  if (HasSubdomainOf(host, "amazon-adsystem.com")) return AdService::kAmazon;
  if (host == "cdn.flashtalking.com") return AdService::kFlashtalking;
  if (host == "s-static.innovid.com") return AdService::kInnovid;
  return AdService::kUnknown;
}

AdType AdTypeForMime(std::string_view mime) {
  const std::string m = AsciiLower(TrimWhitespace(mime.substr(0, mime.find(';'))));
  if (m.starts_with("image/")) return AdType::kImage;
  if (m.starts_with("video/")) return AdType::kVideo;
  if (m == "text/html") return AdType::kEmbeddedWebPage;
  return AdType::kOther;
}

bool IsTrackingAssetName(std::string_view url) {
  std::string_view path = SplitUriReference(url).path;
  if (path.empty()) path = url;
  const std::string_view last = path.substr(path.rfind('/') + 1);
  for (std::string_view name : kTrackingNames) {
    if (EqualsIgnoreCase(last, name)) return true;
  }
  return false;
}

bool IsTinyImage(const ImageSize& size) { return size.width <= 2 && size.height <= 2; }

AdResource ClassifyResource(const cdx::CdxEntry& entry, std::optional<ImageSize> image_size) {
  AdResource r;
  r.entry = entry;
  const UriReference ref = SplitUriReference(entry.original_uri);
  std::string host;
  if (ref.authority) {
    host = SplitAuthority(*ref.authority).host;
  } else {
    host = std::string(cdx::SplitKey(entry.key).host);
  }
  r.service = ServiceForHost(host);
  r.ad_type = AdTypeForMime(entry.mime);
  r.visible = !IsTrackingAssetName(entry.original_uri) &&
              !(r.ad_type == AdType::kImage && image_size && IsTinyImage(*image_size));
  return r;
}

}  // namespace adreplay::adscan
