#include "adreplay/cdx/canonical_url.h"

#include <algorithm>
#include <tuple>
#include <vector>

#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"

namespace adreplay::cdx {

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool IsUnreserved(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '.' || c == '_' || c == '~';
}

bool NeedsEscape(unsigned char c) {
  return c <= 0x20 || c >= 0x7f || c == '"' || c == '<' || c == '>' || c == '\\' ||
         c == '^' || c == '`' || c == '{' || c == '|' || c == '}';
}

void AppendEscaped(std::string& out, unsigned char c) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  out.push_back('%');
  out.push_back(kHex[c >> 4]);
  out.push_back(kHex[c & 0xf]);
}

std::string NormalizeEscapes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c == '%') {
      if (i + 2 < s.size() && HexValue(s[i + 1]) >= 0 && HexValue(s[i + 2]) >= 0) {
        const auto decoded = static_cast<unsigned char>(HexValue(s[i + 1]) * 16 + HexValue(s[i + 2]));
        if (IsUnreserved(decoded)) {
          out.push_back(static_cast<char>(decoded));
        } else {
          AppendEscaped(out, decoded);
        }
        i += 2;
      } else {
        AppendEscaped(out, '%');
      }
    } else if (NeedsEscape(c)) {
      AppendEscaped(out, c);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string NormalizeQuery(std::string_view query) {
  struct Param {
    std::string name, value, text;
    bool operator<(const Param& o) const {
      return std::tie(name, value, text) < std::tie(o.name, o.value, o.text);
    }
  };
  std::vector<Param> params;
  for (std::string_view part : Split(query, '&')) {
    if (part.empty()) continue;
    Param p;
    p.text = NormalizeEscapes(part);
    const size_t eq = p.text.find('=');
    p.name = p.text.substr(0, eq);
    p.value = eq == std::string::npos ? "" : p.text.substr(eq + 1);
    params.push_back(std::move(p));
  }
  std::sort(params.begin(), params.end());
  std::string out;
  for (const Param& p : params) {
    if (!out.empty()) out.push_back('&');
    out += p.text;
  }
  return out;
}

std::string NormalizeHost(std::string_view raw_host, std::string_view port,
                          std::string_view default_port) {
  std::string host = AsciiLower(raw_host);
  while (!host.empty() && host.back() == '.') host.pop_back();
  // Strip "www." while a dotted name remains, which keeps this idempotent.
  while (host.starts_with("www.") && host.find('.', 4) != std::string::npos) {
    host.erase(0, 4);
  }
  host = NormalizeEscapes(host);
  if (!port.empty() && port != default_port) host += ":" + std::string(port);
  return host;
}

struct ParsedInput {
  UriReference ref;
  std::string default_port;
};

// Splits an absolute http(s) URL or a scheme-less key.
ParsedInput ParseInput(std::string_view url) {
  const std::string_view text = TrimWhitespace(url);
  const auto fail = [&]() -> ParsedInput {
    throw CdxError(CdxError::Kind::kNotAbsoluteUrl,
                   "not an absolute http(s) URL: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  UriReference ref = SplitUriReference(text);
  if (ref.scheme) {
    const std::string scheme = AsciiLower(*ref.scheme);
    if (scheme == "http" || scheme == "https") {
      if (!ref.authority || SplitAuthority(*ref.authority).host.empty()) fail();
      return {std::move(ref), scheme == "https" ? "443" : "80"};
    }
    // "host:8080/path" reads as scheme "host"; keep it as a key with a port.
    const std::string_view after = text.substr(ref.scheme->size() + 1);
    const size_t end = after.find_first_of("/?");
    if (!IsAllDigits(after.substr(0, end))) fail();
  }
  if (text.starts_with("/") || text.starts_with(".")) fail();
  ref = SplitUriReference("http://" + std::string(text));
  if (!ref.authority || SplitAuthority(*ref.authority).host.empty()) fail();
  return {std::move(ref), "80"};
}

}  // namespace

std::string_view CanonicalUrl::host() const {
  return std::string_view(key_).substr(0, host_end_);
}

std::string_view CanonicalUrl::path() const {
  const size_t end = query_begin_ == std::string::npos ? key_.size() : query_begin_;
  return std::string_view(key_).substr(host_end_, end - host_end_);
}

std::optional<std::string_view> CanonicalUrl::query() const {
  if (query_begin_ == std::string::npos) return std::nullopt;
  return std::string_view(key_).substr(query_begin_ + 1);
}

CanonicalUrl Canonicalize(std::string_view url) {
  const ParsedInput input = ParseInput(url);
  const Authority authority = SplitAuthority(*input.ref.authority);
  CanonicalUrl out;
  out.key_ = NormalizeHost(authority.host, authority.port, input.default_port);
  out.host_end_ = out.key_.size();
  const std::string path = NormalizeEscapes(input.ref.path);
  out.key_ += path.empty() ? "/" : path;
  if (input.ref.query) {
    const std::string query = NormalizeQuery(*input.ref.query);
    if (!query.empty()) {
      out.query_begin_ = out.key_.size();
      out.key_ += "?" + query;
    }
  }
  return out;
}

std::string CanonicalizePrefix(std::string_view prefix) {
  std::string_view text = TrimWhitespace(prefix);
  while (!text.empty() && text.back() == '*') text.remove_suffix(1);
  const ParsedInput input = ParseInput(text);
  if (input.ref.path.empty() && !input.ref.query) {
    const Authority authority = SplitAuthority(*input.ref.authority);
    return NormalizeHost(authority.host, authority.port, input.default_port);
  }
  return Canonicalize(text).key();
}

KeyParts SplitKey(std::string_view key) {
  KeyParts parts;
  const size_t slash = key.find_first_of("/?");
  parts.host = key.substr(0, slash);
  if (slash == std::string_view::npos) return parts;
  std::string_view rest = key.substr(slash);
  const size_t q = rest.find('?');
  parts.path = rest.substr(0, q);
  if (q != std::string_view::npos) parts.query = rest.substr(q + 1);
  return parts;
}

}  // namespace adreplay::cdx
