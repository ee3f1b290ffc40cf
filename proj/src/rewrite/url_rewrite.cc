#include "adreplay/rewrite/url_rewrite.h"

#include <stdexcept>

#include "adreplay/rewrite/wombat.h"
#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"

namespace adreplay::rewrite {

namespace {

bool IsHtmlSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

std::string_view TrimHtmlSpace(std::string_view s) {
  while (!s.empty() && IsHtmlSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsHtmlSpace(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

RewriteContext MakeRewriteContext(std::string_view base_urir, std::string_view timestamp14,
                                  std::string_view replay_base, bool inject_shim) {
  RewriteContext ctx;
  ctx.timestamp14 = std::string(timestamp14);
  ctx.wombat_sec = ComputeWombatSec(timestamp14);
  ctx.base_urir = std::string(base_urir);
  ctx.inject_shim = inject_shim;
  ctx.replay_base = std::string(replay_base);
  return ctx;
}

bool IsRewritten(std::string_view value, const RewriteContext& ctx) {
  if (ctx.replay_base.empty() || !value.starts_with(ctx.replay_base)) return false;
  try {
    ParseUriM(value, ctx.replay_base);
    return true;
  } catch (const RewriteError&) {
    return false;
  }
}

std::optional<std::string> RewriteUrlValue(std::string_view value, std::string_view base,
                                           Modifier modifier, const RewriteContext& ctx) {
  const std::string_view url = TrimHtmlSpace(value);
  if (url.empty() || url.front() == '#' || IsRewritten(url, ctx)) return std::nullopt;
  std::string resolved;
  try {
    const UriReference ref = SplitUriReference(url);
    if (ref.scheme && !EqualsIgnoreCase(*ref.scheme, "http") &&
        !EqualsIgnoreCase(*ref.scheme, "https")) {
      return std::nullopt;
    }
    resolved = ref.scheme ? std::string(url) : ResolveReference(base, url);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!IsHttpUrl(resolved)) return std::nullopt;
  return UriM{ctx.replay_base, ctx.timestamp14, modifier, std::move(resolved)}.ToString();
}

std::string RewriteSrcset(std::string_view value, std::string_view base, Modifier modifier,
                          const RewriteContext& ctx) {
  std::string out;
  size_t i = 0;
  while (i < value.size()) {
    const size_t start = i;
    while (i < value.size() && (IsHtmlSpace(value[i]) || value[i] == ',')) ++i;
    out.append(value.substr(start, i - start));
    if (i >= value.size()) break;
    const size_t url_begin = i;
    while (i < value.size() && !IsHtmlSpace(value[i])) ++i;
    size_t url_end = i;
    // Trailing commas end the candidate and are not part of the URL.
    while (url_end > url_begin && value[url_end - 1] == ',') --url_end;
    const std::string_view url = value.substr(url_begin, url_end - url_begin);
    const auto rewritten = RewriteUrlValue(url, base, modifier, ctx);
    out += rewritten ? *rewritten : std::string(url);
    out.append(value.substr(url_end, i - url_end));
    if (url_end != i) continue;
    // Descriptors run to the next comma outside parentheses.
    const size_t desc_begin = i;
    int depth = 0;
    while (i < value.size() && (value[i] != ',' || depth > 0)) {
      if (value[i] == '(') ++depth;
      if (value[i] == ')' && depth > 0) --depth;
      ++i;
    }
    out.append(value.substr(desc_begin, i - desc_begin));
  }
  return out;
}

}  // namespace adreplay::rewrite
