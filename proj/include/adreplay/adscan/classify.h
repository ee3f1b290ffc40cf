#ifndef ADREPLAY_ADSCAN_CLASSIFY_H_
#define ADREPLAY_ADSCAN_CLASSIFY_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/adscan/image_probe.h"
#include "adreplay/cdx/capture_index.h"

namespace adreplay::adscan {

class AdScanError : public std::runtime_error {
 public:
  enum class Kind { kNotAbsoluteUrl, kBadBlocklist, kBadReport };

  AdScanError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class AdService { kGoogleDisplay, kGoogleSafeframe, kAmazon, kFlashtalking, kInnovid, kUnknown };
enum class AdType { kImage, kVideo, kEmbeddedWebPage, kOther };

inline constexpr AdService kAllServices[] = {
    AdService::kGoogleDisplay, AdService::kGoogleSafeframe, AdService::kAmazon,
    AdService::kFlashtalking,  AdService::kInnovid,         AdService::kUnknown};
inline constexpr AdType kAllAdTypes[] = {AdType::kImage, AdType::kVideo,
                                         AdType::kEmbeddedWebPage, AdType::kOther};

std::string_view ServiceName(AdService service);
std::optional<AdService> ParseServiceName(std::string_view name);
std::string_view AdTypeName(AdType type);
std::optional<AdType> ParseAdTypeName(std::string_view name);

struct AdResource {
  cdx::CdxEntry entry;
  AdService service = AdService::kUnknown;
  AdType ad_type = AdType::kOther;
  bool visible = true;

  bool operator==(const AdResource&) const = default;
};

// Host table: s0.2mdn.net and securepubads.g.doubleclick.net are Google
// display, <label>.safeframe.googlesyndication.com is SafeFrame, and
// *.amazon-adsystem.com, cdn.flashtalking.com and s-static.innovid.com map
// to their services. Matching ignores case and a trailing port.
AdService ServiceForHost(std::string_view host);

// image/* -> image, video/* -> video, text/html -> embedded web page.
AdType AdTypeForMime(std::string_view mime);

// True when the last path segment is a known tracking asset name such as
// pixel.gif.
bool IsTrackingAssetName(std::string_view url);

// Images of at most 2x2 pixels are tracking assets.
bool IsTinyImage(const ImageSize& size);

// `image_size` comes from the payload when the caller has it.
AdResource ClassifyResource(const cdx::CdxEntry& entry,
                            std::optional<ImageSize> image_size = std::nullopt);

}  // namespace adreplay::adscan

#endif  // ADREPLAY_ADSCAN_CLASSIFY_H_
