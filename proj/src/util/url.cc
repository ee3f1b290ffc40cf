#include "adreplay/util/url.h"

#include "adreplay/util/strings.h"

namespace adreplay {

namespace {

bool IsValidScheme(std::string_view s) {
  if (s.empty()) return false;
  const auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  if (!alpha(s[0])) return false;
  for (char c : s.substr(1)) {
    if (!alpha(c) && !IsAsciiDigit(c) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return true;
}

std::string MergePaths(const UriReference& base, std::string_view ref_path) {
  if (base.authority && base.path.empty()) return "/" + std::string(ref_path);
  const size_t slash = base.path.rfind('/');
  if (slash == std::string::npos) return std::string(ref_path);
  return base.path.substr(0, slash + 1) + std::string(ref_path);
}

}  // namespace

std::string UriReference::ToString() const {
  std::string out;
  if (scheme) out += *scheme + ":";
  if (authority) out += "//" + *authority;
  out += path;
  if (query) out += "?" + *query;
  if (fragment) out += "#" + *fragment;
  return out;
}

UriReference SplitUriReference(std::string_view text) {
  UriReference ref;
  const size_t colon = text.find(':');
  const size_t delim = text.find_first_of("/?#");
  if (colon != std::string_view::npos && (delim == std::string_view::npos || colon < delim) &&
      IsValidScheme(text.substr(0, colon))) {
    ref.scheme = std::string(text.substr(0, colon));
    text.remove_prefix(colon + 1);
  }
  if (text.substr(0, 2) == "//") {
    text.remove_prefix(2);
    const size_t end = text.find_first_of("/?#");
    ref.authority = std::string(text.substr(0, end));
    text.remove_prefix(end == std::string_view::npos ? text.size() : end);
  }
  const size_t hash = text.find('#');
  if (hash != std::string_view::npos) {
    ref.fragment = std::string(text.substr(hash + 1));
    text = text.substr(0, hash);
  }
  const size_t qmark = text.find('?');
  if (qmark != std::string_view::npos) {
    ref.query = std::string(text.substr(qmark + 1));
    text = text.substr(0, qmark);
  }
  ref.path = std::string(text);
  return ref;
}

Authority SplitAuthority(std::string_view authority) {
  Authority out;
  const size_t at = authority.rfind('@');
  if (at != std::string_view::npos) {
    out.userinfo = std::string(authority.substr(0, at));
    authority.remove_prefix(at + 1);
  }
  // IPv6 literals keep their colons inside brackets.
  size_t search_from = 0;
  if (!authority.empty() && authority.front() == '[') {
    const size_t close = authority.find(']');
    search_from = close == std::string_view::npos ? authority.size() : close;
  }
  const size_t colon = authority.find(':', search_from);
  if (colon != std::string_view::npos && IsAllDigits(authority.substr(colon + 1))) {
    out.port = std::string(authority.substr(colon + 1));
    authority = authority.substr(0, colon);
  } else if (colon != std::string_view::npos && colon + 1 == authority.size()) {
    authority = authority.substr(0, colon);
  }
  out.host = std::string(authority);
  return out;
}

std::string RemoveDotSegments(std::string_view path) {
  std::string input(path);
  std::string output;
  while (!input.empty()) {
    if (input.starts_with("../")) {
      input.erase(0, 3);
    } else if (input.starts_with("./")) {
      input.erase(0, 2);
    } else if (input.starts_with("/./")) {
      input.replace(0, 3, "/");
    } else if (input == "/.") {
      input = "/";
    } else if (input.starts_with("/../") || input == "/..") {
      input = input == "/.." ? "/" : input.substr(3);
      const size_t last = output.rfind('/');
      output.erase(last == std::string::npos ? 0 : last);
    } else if (input == "." || input == "..") {
      input.clear();
    } else {
      const size_t next = input.find('/', input[0] == '/' ? 1 : 0);
      output += input.substr(0, next);
      input.erase(0, next == std::string::npos ? input.size() : next);
    }
  }
  return output;
}

std::string ResolveReference(std::string_view base_text, std::string_view reference) {
  const UriReference base = SplitUriReference(base_text);
  const UriReference ref = SplitUriReference(reference);
  UriReference target;
  if (ref.scheme) {
    target.scheme = ref.scheme;
    target.authority = ref.authority;
    target.path = RemoveDotSegments(ref.path);
    target.query = ref.query;
  } else {
    if (ref.authority) {
      target.authority = ref.authority;
      target.path = RemoveDotSegments(ref.path);
      target.query = ref.query;
    } else {
      if (ref.path.empty()) {
        target.path = base.path;
        target.query = ref.query ? ref.query : base.query;
      } else {
        if (ref.path.front() == '/') {
          target.path = RemoveDotSegments(ref.path);
        } else {
          target.path = RemoveDotSegments(MergePaths(base, ref.path));
        }
        target.query = ref.query;
      }
      target.authority = base.authority;
    }
    target.scheme = base.scheme;
  }
  target.fragment = ref.fragment;
  return target.ToString();
}

bool IsAbsoluteUri(std::string_view text) {
  return SplitUriReference(text).scheme.has_value();
}

bool IsHttpUrl(std::string_view text) {
  const UriReference ref = SplitUriReference(text);
  if (!ref.scheme || !ref.authority) return false;
  if (!EqualsIgnoreCase(*ref.scheme, "http") && !EqualsIgnoreCase(*ref.scheme, "https")) {
    return false;
  }
  return !SplitAuthority(*ref.authority).host.empty();
}

}  // namespace adreplay
