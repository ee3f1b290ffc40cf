#include "adreplay/replay/http_body.h"

#include <charconv>
#include <limits>

#include "adreplay/util/gzip.h"
#include "adreplay/util/strings.h"

namespace adreplay::replay {

namespace {

bool ParseUint(std::string_view s, std::uint64_t* out) {
  if (s.empty() || !IsAllDigits(s)) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::optional<std::string> Dechunk(std::string_view body) {
  std::string out;
  size_t pos = 0;
  while (true) {
    const size_t eol = body.find("\r\n", pos);
    if (eol == std::string_view::npos) return std::nullopt;
    std::string_view line = body.substr(pos, eol - pos);
    line = TrimWhitespace(line.substr(0, line.find(';')));
    std::uint64_t size = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), size, 16);
    if (line.empty() || ec != std::errc() || ptr != line.data() + line.size()) return std::nullopt;
    pos = eol + 2;
    if (size == 0) return out;
    if (size > body.size() - pos) return std::nullopt;
    out.append(body.substr(pos, size));
    pos += size;
    if (body.substr(pos, 2) != "\r\n") return std::nullopt;
    pos += 2;
  }
}

std::optional<std::string> DecodeContentEncoding(std::string_view body,
                                                 std::string_view encoding) {
  const std::string e = AsciiLower(TrimWhitespace(encoding));
  try {
    if (e.empty() || e == "identity") return std::string(body);
    if (e == "gzip" || e == "x-gzip") return GzipDecompress(body);
    if (e == "deflate") return InflateHttpDeflate(body);
  } catch (const CompressionError&) {
  }
  return std::nullopt;
}

RangeResult ParseRange(std::string_view header, std::uint64_t size, RangeSpec* out) {
  header = TrimWhitespace(header);
  if (!StartsWithIgnoreCase(header, "bytes=")) return RangeResult::kNone;
  const std::string_view spec = TrimWhitespace(header.substr(6));
  if (spec.find(',') != std::string_view::npos) return RangeResult::kNone;
  const size_t dash = spec.find('-');
  if (dash == std::string_view::npos) return RangeResult::kNone;
  const std::string_view a = TrimWhitespace(spec.substr(0, dash));
  const std::string_view b = TrimWhitespace(spec.substr(dash + 1));
  std::uint64_t first = 0, last = 0;
  if (a.empty()) {
    // Suffix range: the last `b` bytes.
    if (!ParseUint(b, &last)) return RangeResult::kNone;
    if (last == 0 || size == 0) return RangeResult::kUnsatisfiable;
    out->first = last >= size ? 0 : size - last;
    out->last = size - 1;
    return RangeResult::kSatisfiable;
  }
  if (!ParseUint(a, &first)) return RangeResult::kNone;
  if (b.empty()) {
    last = std::numeric_limits<std::uint64_t>::max();
  } else if (!ParseUint(b, &last) || last < first) {
    return RangeResult::kNone;
  }
  if (first >= size) return RangeResult::kUnsatisfiable;
  out->first = first;
  out->last = last >= size ? size - 1 : last;
  return RangeResult::kSatisfiable;
}

}  // namespace adreplay::replay
