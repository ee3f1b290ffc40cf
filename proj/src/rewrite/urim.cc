#include "adreplay/rewrite/urim.h"

#include <array>
#include <utility>

#include "adreplay/util/strings.h"
#include "adreplay/util/timestamp.h"
#include "adreplay/util/url.h"

namespace adreplay::rewrite {

namespace {

constexpr std::array<std::pair<Modifier, std::string_view>, 7> kModifiers = {{
    {Modifier::kNone, ""},
    {Modifier::kJs, "js_"},
    {Modifier::kCs, "cs_"},
    {Modifier::kIm, "im_"},
    {Modifier::kIf, "if_"},
    {Modifier::kId, "id_"},
    {Modifier::kOe, "oe_"},
}};

void CheckTimestamp(std::string_view ts) {
  if (ts.size() != 14 || !IsAllDigits(ts) || !Timestamp14::Parse(ts)) {
    throw RewriteError(RewriteError::Kind::kInvalidTimestamp,
                       "invalid timestamp '" + std::string(ts) + "'");
  }
}

}  // namespace

std::string_view ModifierToken(Modifier modifier) {
  for (const auto& [m, token] : kModifiers) {
    if (m == modifier) return token;
  }
  return "";
}

std::optional<Modifier> ParseModifierToken(std::string_view token) {
  for (const auto& [m, t] : kModifiers) {
    if (t == token) return m;
  }
  return std::nullopt;
}

std::string UriM::ToString() const {
  std::string out = replay_base;
  out += timestamp14;
  out += ModifierToken(modifier);
  out += '/';
  out += urir;
  return out;
}

std::string MakeUriM(std::string_view replay_base, std::string_view urir,
                     std::string_view timestamp14, Modifier modifier) {
  CheckTimestamp(timestamp14);
  if (!IsAbsoluteUri(urir)) {
    throw RewriteError(RewriteError::Kind::kRelativeUrir,
                       "URI-R is not absolute: '" + std::string(urir) + "'");
  }
  return UriM{std::string(replay_base), std::string(timestamp14), modifier, std::string(urir)}
      .ToString();
}

UriM ParseUriM(std::string_view text, std::string_view replay_base) {
  if (!text.starts_with(replay_base)) {
    throw RewriteError(RewriteError::Kind::kNotAUriM,
                       "'" + std::string(text) + "' is outside " + std::string(replay_base));
  }
  std::string_view rest = text.substr(replay_base.size());
  size_t digits = 0;
  while (digits < rest.size() && IsAsciiDigit(rest[digits])) ++digits;
  if (digits == 0) {
    throw RewriteError(RewriteError::Kind::kNotAUriM,
                       "no timestamp in '" + std::string(text) + "'");
  }
  const std::string_view ts = rest.substr(0, digits);
  CheckTimestamp(ts);
  rest.remove_prefix(digits);
  const size_t slash = rest.find('/');
  if (slash == std::string_view::npos) {
    throw RewriteError(RewriteError::Kind::kNotAUriM,
                       "no URI-R in '" + std::string(text) + "'");
  }
  const auto modifier = ParseModifierToken(rest.substr(0, slash));
  if (!modifier) {
    throw RewriteError(RewriteError::Kind::kUnknownModifier,
                       "unknown modifier '" + std::string(rest.substr(0, slash)) + "'");
  }
  const std::string_view urir = rest.substr(slash + 1);
  if (!IsAbsoluteUri(urir)) {
    throw RewriteError(RewriteError::Kind::kRelativeUrir,
                       "URI-R is not absolute: '" + std::string(urir) + "'");
  }
  return UriM{std::string(replay_base), std::string(ts), *modifier, std::string(urir)};
}

}  // namespace adreplay::rewrite
