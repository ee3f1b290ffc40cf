#ifndef ADREPLAY_REPLAY_HTTP_BODY_H_
#define ADREPLAY_REPLAY_HTTP_BODY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adreplay::replay {

// Decodes Transfer-Encoding: chunked. Returns nullopt on malformed input.
std::optional<std::string> Dechunk(std::string_view body);

// Decodes gzip, x-gzip, deflate and identity; nullopt for anything else or
// a corrupt body.
std::optional<std::string> DecodeContentEncoding(std::string_view body,
                                                 std::string_view encoding);

struct RangeSpec {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive

  bool operator==(const RangeSpec&) const = default;
};

enum class RangeResult { kNone, kSatisfiable, kUnsatisfiable };

// A single "bytes=" range against a body of `size` bytes. Multiple ranges
// and malformed headers give kNone, meaning the full body is served.
RangeResult ParseRange(std::string_view header, std::uint64_t size, RangeSpec* out);

}  // namespace adreplay::replay

#endif  // ADREPLAY_REPLAY_HTTP_BODY_H_
