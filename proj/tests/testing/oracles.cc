#include "testing/oracles.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>
#include <tuple>

namespace adreplay::testing {

namespace {

bool Unreserved(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~';
}

std::string FixEscapes(const std::string& s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    const unsigned char c = s[i];
    if (c == '%' && i + 2 < s.size() + 0 && std::isxdigit((unsigned char)s[i + 1]) &&
        std::isxdigit((unsigned char)s[i + 2])) {
      const int v = std::stoi(s.substr(i + 1, 2), nullptr, 16);
      if (Unreserved(static_cast<unsigned char>(v))) {
        out += static_cast<char>(v);
      } else {
        out += '%';
        out += static_cast<char>(std::toupper((unsigned char)s[i + 1]));
        out += static_cast<char>(std::toupper((unsigned char)s[i + 2]));
      }
      i += 2;
    } else if (c <= 0x20 || c >= 0x7f || std::string_view("\"<>\\^`{|}").find(c) != std::string_view::npos) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

}  // namespace

std::string ReferenceCanonicalize(const std::string& url) {
  static const std::regex kUrl(R"(^([A-Za-z][A-Za-z0-9+.-]*)://([^/?#]*)([^?#]*)(\?[^#]*)?(#.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) throw std::invalid_argument(url);
  std::string scheme = m[1];
  std::transform(scheme.begin(), scheme.end(), scheme.begin(), ::tolower);
  std::string authority = m[2];
  std::transform(authority.begin(), authority.end(), authority.begin(), ::tolower);
  authority = authority.substr(authority.find('@') == std::string::npos ? 0 : authority.find('@') + 1);
  std::string host = authority, port;
  if (const size_t colon = authority.rfind(':'); colon != std::string::npos) {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  if (port.empty() || (scheme == "http" && port == "80") || (scheme == "https" && port == "443")) {
    port.clear();
  }
  while (host.starts_with("www.") && host.find('.', 4) != std::string::npos) host = host.substr(4);
  std::string path = m[3].str().empty() ? "/" : FixEscapes(m[3]);
  std::string key = host + (port.empty() ? "" : ":" + port) + path;
  if (m[4].matched && m[4].length() > 1) {
    std::vector<std::string> params;
    const std::string query = m[4].str().substr(1);
    size_t start = 0;
    while (start <= query.size()) {
      const size_t amp = std::min(query.find('&', start), query.size());
      if (amp > start) params.push_back(FixEscapes(query.substr(start, amp - start)));
      start = amp + 1;
    }
    std::sort(params.begin(), params.end(), [](const std::string& a, const std::string& b) {
      const auto split = [](const std::string& p) {
        const size_t eq = p.find('=');
        return std::make_tuple(p.substr(0, eq), eq == std::string::npos ? "" : p.substr(eq + 1), p);
      };
      return split(a) < split(b);
    });
    std::string joined;
    for (const auto& p : params) joined += (joined.empty() ? "" : "&") + p;
    if (!joined.empty()) key += "?" + joined;
  }
  return key;
}

const cdx::CdxEntry* BruteForceNearest(std::span<const cdx::CdxEntry> all, std::string_view key,
                                       const Timestamp14& ts) {
  const cdx::CdxEntry* best = nullptr;
  auto score = [&](const cdx::CdxEntry& e) {
    const std::int64_t d = e.timestamp.epoch_seconds() - ts.epoch_seconds();
    return std::make_tuple(!e.preferred(), d < 0 ? -d : d, e.timestamp.epoch_seconds());
  };
  for (const cdx::CdxEntry& e : all) {
    if (e.key != key) continue;
    if (best == nullptr || score(e) < score(*best)) best = &e;
  }
  return best;
}

std::int64_t EpochSecondsOracle(int year, int month, int day, int hour, int minute, int second) {
  const std::int64_t y = year - (month <= 2);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days = era * 146097 + doe - 719468;
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::uint32_t LcgStateAfter(std::uint64_t seed, std::uint64_t k) {
  constexpr std::uint64_t m = 233280;
  // x -> a x + c, squared by composition.
  std::uint64_t a = 9301, c = 49297;
  std::uint64_t ra = 1, rc = 0;
  while (k > 0) {
    if (k & 1) {
      rc = (a * rc + c) % m;
      ra = (a * ra) % m;
    }
    c = (a * c + c) % m;
    a = (a * a) % m;
    k >>= 1;
  }
  return static_cast<std::uint32_t>((ra * (seed % m) + rc) % m);
}

std::string ExactDrawDecimal(std::uint32_t state) {
  constexpr std::uint32_t m = 233280;
  std::vector<int> digits;
  std::uint64_t rem = state;
  for (int i = 0; i < 13; ++i) {
    rem *= 10;
    digits.push_back(static_cast<int>(rem / m));
    rem %= m;
  }
  const bool round_up = digits.back() >= 5;
  digits.pop_back();
  int whole = 0;
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[i] == 9) digits[i--] = 0;
    if (i >= 0) {
      ++digits[i];
    } else {
      whole = 1;
    }
  }
  std::string out = std::to_string(whole) + ".";
  for (int d : digits) out += static_cast<char>('0' + d);
  return out;
}

const std::vector<ResolutionCase>& RfcResolutionCases() {
  static const std::vector<ResolutionCase> cases = {
      {"g:h", "g:h"},
      {"g", "http://a/b/c/g"},
      {"./g", "http://a/b/c/g"},
      {"g/", "http://a/b/c/g/"},
      {"/g", "http://a/g"},
      {"//g", "http://g"},
      {"?y", "http://a/b/c/d;p?y"},
      {"g?y", "http://a/b/c/g?y"},
      {"#s", "http://a/b/c/d;p?q#s"},
      {"g#s", "http://a/b/c/g#s"},
      {"g?y#s", "http://a/b/c/g?y#s"},
      {";x", "http://a/b/c/;x"},
      {"g;x", "http://a/b/c/g;x"},
      {"g;x?y#s", "http://a/b/c/g;x?y#s"},
      {"", "http://a/b/c/d;p?q"},
      {".", "http://a/b/c/"},
      {"./", "http://a/b/c/"},
      {"..", "http://a/b/"},
      {"../", "http://a/b/"},
      {"../g", "http://a/b/g"},
      {"../..", "http://a/"},
      {"../../", "http://a/"},
      {"../../g", "http://a/g"},
      {"../../../g", "http://a/g"},
      {"../../../../g", "http://a/g"},
      {"/./g", "http://a/g"},
      {"/../g", "http://a/g"},
      {"g.", "http://a/b/c/g."},
      {".g", "http://a/b/c/.g"},
      {"g..", "http://a/b/c/g.."},
      {"..g", "http://a/b/c/..g"},
      {"./../g", "http://a/b/g"},
      {"./g/.", "http://a/b/c/g/"},
      {"g/./h", "http://a/b/c/g/h"},
      {"g/../h", "http://a/b/c/h"},
      {"g;x=1/./y", "http://a/b/c/g;x=1/y"},
      {"g;x=1/../y", "http://a/b/c/y"},
      {"g?y/./x", "http://a/b/c/g?y/./x"},
      {"g?y/../x", "http://a/b/c/g?y/../x"},
      {"g#s/./x", "http://a/b/c/g#s/./x"},
      {"g#s/../x", "http://a/b/c/g#s/../x"},
      {"http:g", "http:g"},
  };
  return cases;
}

}  // namespace adreplay::testing
