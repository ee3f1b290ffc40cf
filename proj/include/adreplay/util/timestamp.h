#ifndef ADREPLAY_UTIL_TIMESTAMP_H_
#define ADREPLAY_UTIL_TIMESTAMP_H_

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adreplay {

// A UTC instant at second precision, rendered as YYYYMMDDHHMMSS.
class Timestamp14 {
 public:
  Timestamp14();  // 19700101000000

  static std::optional<Timestamp14> Parse(std::string_view text);
  static Timestamp14 FromTime(std::chrono::sys_seconds time);

  const std::string& text() const { return text_; }
  std::chrono::sys_seconds time() const { return time_; }
  std::int64_t epoch_seconds() const { return time_.time_since_epoch().count(); }

  // Fixed-width digits order the same way as the instants they encode.
  friend bool operator==(const Timestamp14& a, const Timestamp14& b) {
    return a.time_ == b.time_;
  }
  friend std::strong_ordering operator<=>(const Timestamp14& a, const Timestamp14& b) {
    return a.time_ <=> b.time_;
  }

 private:
  Timestamp14(std::string text, std::chrono::sys_seconds time)
      : text_(std::move(text)), time_(time) {}

  std::string text_;
  std::chrono::sys_seconds time_;
};

// Absolute distance in seconds.
std::int64_t SecondsBetween(const Timestamp14& a, const Timestamp14& b);

// WARC-Date form: 2023-08-22T16:15:44Z. Parsing also accepts fractional
// seconds, which are truncated.
std::string FormatWarcDate(std::chrono::sys_seconds time);
std::optional<std::chrono::sys_seconds> ParseWarcDate(std::string_view text);

// RFC 1123 form used by HTTP: Tue, 22 Aug 2023 16:15:44 GMT.
std::string FormatHttpDate(std::chrono::sys_seconds time);

}  // namespace adreplay

#endif  // ADREPLAY_UTIL_TIMESTAMP_H_
