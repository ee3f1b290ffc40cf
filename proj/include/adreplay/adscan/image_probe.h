#ifndef ADREPLAY_ADSCAN_IMAGE_PROBE_H_
#define ADREPLAY_ADSCAN_IMAGE_PROBE_H_

#include <cstdint>
#include <optional>
#include <string_view>

namespace adreplay::adscan {

struct ImageSize {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  bool operator==(const ImageSize&) const = default;
};

// Dimensions from the header of a GIF, PNG, JPEG or WebP image, without
// decoding pixel data.
std::optional<ImageSize> ProbeImageSize(std::string_view bytes);

}  // namespace adreplay::adscan

#endif  // ADREPLAY_ADSCAN_IMAGE_PROBE_H_
