#ifndef ADREPLAY_CDX_CANONICAL_URL_H_
#define ADREPLAY_CDX_CANONICAL_URL_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adreplay::cdx {

class CdxError : public std::runtime_error {
 public:
  enum class Kind { kNotAbsoluteUrl, kNotFound, kBadCdxj };

  CdxError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Index key for a URL: scheme dropped, host lowercased with leading "www."
// removed, default port stripped, fragment dropped, escapes of unreserved
// characters decoded (others uppercased), query parameters sorted by name
// then value, empty query removed. Example: "https://Example.com:443/a?b=2&a=1#f"
// becomes "example.com/a?a=1&b=2".
class CanonicalUrl {
 public:
  const std::string& key() const { return key_; }
  std::string_view host() const;  // includes ":port" when kept
  std::string_view path() const;
  std::optional<std::string_view> query() const;

  friend bool operator==(const CanonicalUrl&, const CanonicalUrl&) = default;

 private:
  friend CanonicalUrl Canonicalize(std::string_view url);
  std::string key_;
  size_t host_end_ = 0;
  size_t query_begin_ = std::string::npos;  // index of '?'
};

// Accepts absolute http(s) URLs and already-canonical keys, so the result is
// a fixed point. Throws CdxError(kNotAbsoluteUrl).
CanonicalUrl Canonicalize(std::string_view url);

// Canonical form of a URL prefix for range scans. A trailing '*' is ignored;
// a bare origin ("https://cdn.flashtalking.com") yields just the host so it
// also matches longer hostnames, as Wayback-style prefix queries do.
std::string CanonicalizePrefix(std::string_view prefix);

struct KeyParts {
  std::string_view host;
  std::string_view path;
  std::optional<std::string_view> query;
};

KeyParts SplitKey(std::string_view key);

}  // namespace adreplay::cdx

#endif  // ADREPLAY_CDX_CANONICAL_URL_H_
