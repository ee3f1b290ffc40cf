#ifndef ADREPLAY_UTIL_URL_H_
#define ADREPLAY_UTIL_URL_H_

#include <optional>
#include <string>
#include <string_view>

namespace adreplay {

// The five generic components of a URI reference. Absent components are
// distinguished from empty ones ("http://h/?" has an empty query).
struct UriReference {
  std::optional<std::string> scheme;
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;

  std::string ToString() const;
  bool operator==(const UriReference&) const = default;
};

UriReference SplitUriReference(std::string_view text);

struct Authority {
  std::string userinfo;
  std::string host;
  std::string port;  // digits only; empty when absent
};

Authority SplitAuthority(std::string_view authority);

std::string RemoveDotSegments(std::string_view path);

// Strict reference resolution; `base` must carry a scheme.
std::string ResolveReference(std::string_view base, std::string_view reference);

bool IsAbsoluteUri(std::string_view text);

// True for http: and https: URLs that carry an authority with a host.
bool IsHttpUrl(std::string_view text);

}  // namespace adreplay

#endif  // ADREPLAY_UTIL_URL_H_
