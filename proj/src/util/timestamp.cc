#include "adreplay/util/timestamp.h"

#include <array>
#include <cstdio>

#include "adreplay/util/strings.h"

namespace adreplay {

namespace {

using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::sys_seconds;

int DigitsToInt(std::string_view s) {
  int value = 0;
  for (char c : s) value = value * 10 + (c - '0');
  return value;
}

std::optional<sys_seconds> FromFields(int year, int month, int day, int hour,
                                      int minute, int second) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (year < 1 || !ymd.ok() || hour > 23 || minute > 59 || second > 59) {
    return std::nullopt;
  }
  return sys_days{ymd} + std::chrono::hours{hour} + std::chrono::minutes{minute} +
         std::chrono::seconds{second};
}

struct Fields {
  int year, month, day, hour, minute, second;
  unsigned weekday;
};

Fields Decompose(sys_seconds time) {
  const auto day_point = std::chrono::floor<days>(time);
  const std::chrono::year_month_day ymd{day_point};
  const std::chrono::hh_mm_ss hms{time - day_point};
  return Fields{static_cast<int>(ymd.year()),
                static_cast<int>(static_cast<unsigned>(ymd.month())),
                static_cast<int>(static_cast<unsigned>(ymd.day())),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()),
                std::chrono::weekday{day_point}.c_encoding()};
}

}  // namespace

Timestamp14::Timestamp14() : text_("19700101000000"), time_() {}

std::optional<Timestamp14> Timestamp14::Parse(std::string_view text) {
  if (text.size() != 14 || !IsAllDigits(text)) return std::nullopt;
  const auto time = FromFields(DigitsToInt(text.substr(0, 4)), DigitsToInt(text.substr(4, 2)),
                               DigitsToInt(text.substr(6, 2)), DigitsToInt(text.substr(8, 2)),
                               DigitsToInt(text.substr(10, 2)), DigitsToInt(text.substr(12, 2)));
  if (!time) return std::nullopt;
  return Timestamp14(std::string(text), *time);
}

Timestamp14 Timestamp14::FromTime(sys_seconds time) {
  const Fields f = Decompose(time);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02d%02d%02d%02d", f.year, f.month, f.day,
                f.hour, f.minute, f.second);
  return Timestamp14(buf, time);
}

std::int64_t SecondsBetween(const Timestamp14& a, const Timestamp14& b) {
  const std::int64_t d = a.epoch_seconds() - b.epoch_seconds();
  return d < 0 ? -d : d;
}

std::string FormatWarcDate(sys_seconds time) {
  const Fields f = Decompose(time);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", f.year, f.month, f.day,
                f.hour, f.minute, f.second);
  return buf;
}

std::optional<sys_seconds> ParseWarcDate(std::string_view text) {
  // YYYY-MM-DDThh:mm:ss[.fraction]Z
  if (text.size() < 20 || text.back() != 'Z') return std::nullopt;
  const auto digits_at = [&](size_t pos, size_t n) {
    return IsAllDigits(text.substr(pos, n));
  };
  if (!digits_at(0, 4) || text[4] != '-' || !digits_at(5, 2) || text[7] != '-' ||
      !digits_at(8, 2) || text[10] != 'T' || !digits_at(11, 2) || text[13] != ':' ||
      !digits_at(14, 2) || text[16] != ':' || !digits_at(17, 2)) {
    return std::nullopt;
  }
  const std::string_view rest = text.substr(19, text.size() - 20);
  if (!rest.empty() && (rest[0] != '.' || !IsAllDigits(rest.substr(1)))) {
    return std::nullopt;
  }
  return FromFields(DigitsToInt(text.substr(0, 4)), DigitsToInt(text.substr(5, 2)),
                    DigitsToInt(text.substr(8, 2)), DigitsToInt(text.substr(11, 2)),
                    DigitsToInt(text.substr(14, 2)), DigitsToInt(text.substr(17, 2)));
}

std::string FormatHttpDate(sys_seconds time) {
  static constexpr std::array<const char*, 7> kDays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};
  static constexpr std::array<const char*, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  const Fields f = Decompose(time);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s, %02d %s %04d %02d:%02d:%02d GMT", kDays[f.weekday],
                f.day, kMonths[f.month - 1], f.year, f.hour, f.minute, f.second);
  return buf;
}

}  // namespace adreplay
