#include "adreplay/adscan/image_probe.h"

namespace adreplay::adscan {

namespace {

std::uint32_t Byte(std::string_view b, size_t i) { return static_cast<unsigned char>(b[i]); }
std::uint32_t Le16(std::string_view b, size_t i) { return Byte(b, i) | Byte(b, i + 1) << 8; }
std::uint32_t Be16(std::string_view b, size_t i) { return Byte(b, i) << 8 | Byte(b, i + 1); }
std::uint32_t Le24(std::string_view b, size_t i) { return Le16(b, i) | Byte(b, i + 2) << 16; }
std::uint32_t Be32(std::string_view b, size_t i) { return Be16(b, i) << 16 | Be16(b, i + 2); }

std::optional<ImageSize> ProbeJpeg(std::string_view b) {
  size_t i = 2;
  while (i + 4 <= b.size()) {
    if (Byte(b, i) != 0xFF) return std::nullopt;
    const std::uint32_t marker = Byte(b, i + 1);
    if (marker == 0xFF) {
      ++i;  // fill byte
      continue;
    }
    if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      i += 2;
      continue;
    }
    const std::uint32_t length = Be16(b, i + 2);
    if (length < 2) return std::nullopt;
    const bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 &&
                     marker != 0xCC;
    if (sof) {
      if (i + 9 > b.size()) return std::nullopt;
      return ImageSize{Be16(b, i + 7), Be16(b, i + 5)};
    }
    i += 2 + length;
  }
  return std::nullopt;
}

std::optional<ImageSize> ProbeWebp(std::string_view b) {
  if (b.size() < 30) return std::nullopt;
  const std::string_view chunk = b.substr(12, 4);
  if (chunk == "VP8 ") {
    if (Byte(b, 23) != 0x9D || Byte(b, 24) != 0x01 || Byte(b, 25) != 0x2A) return std::nullopt;
    return ImageSize{Le16(b, 26) & 0x3FFF, Le16(b, 28) & 0x3FFF};
  }
  if (chunk == "VP8L") {
    if (Byte(b, 20) != 0x2F) return std::nullopt;
    const std::uint32_t bits = Byte(b, 21) | Byte(b, 22) << 8 | Byte(b, 23) << 16 | Byte(b, 24) << 24;
    return ImageSize{(bits & 0x3FFF) + 1, ((bits >> 14) & 0x3FFF) + 1};
  }
  if (chunk == "VP8X") {
    return ImageSize{Le24(b, 24) + 1, Le24(b, 27) + 1};
  }
  return std::nullopt;
}

}  // namespace

std::optional<ImageSize> ProbeImageSize(std::string_view b) {
  if (b.size() >= 10 && (b.starts_with("GIF87a") || b.starts_with("GIF89a"))) {
    return ImageSize{Le16(b, 6), Le16(b, 8)};
  }
  if (b.size() >= 24 && b.starts_with("\x89PNG\r\n\x1a\n") && b.substr(12, 4) == "IHDR") {
    return ImageSize{Be32(b, 16), Be32(b, 20)};
  }
  if (b.size() >= 4 && Byte(b, 0) == 0xFF && Byte(b, 1) == 0xD8) return ProbeJpeg(b);
  if (b.size() >= 16 && b.starts_with("RIFF") && b.substr(8, 4) == "WEBP") return ProbeWebp(b);
  return std::nullopt;
}

}  // namespace adreplay::adscan
