#ifndef ADREPLAY_REWRITE_URIM_H_
#define ADREPLAY_REWRITE_URIM_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adreplay::rewrite {

class RewriteError : public std::runtime_error {
 public:
  enum class Kind { kInvalidTimestamp, kRelativeUrir, kNotAUriM, kUnknownModifier };

  RewriteError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Modifier { kNone, kJs, kCs, kIm, kIf, kId, kOe };

// "", "js_", "cs_", "im_", "if_", "id_", "oe_".
std::string_view ModifierToken(Modifier modifier);
std::optional<Modifier> ParseModifierToken(std::string_view token);

// {replay_base}{YYYYMMDDHHMMSS}[{modifier}]/{absolute URI-R}
struct UriM {
  std::string replay_base;
  std::string timestamp14;
  Modifier modifier = Modifier::kNone;
  std::string urir;

  std::string ToString() const;
  bool operator==(const UriM&) const = default;
};

// Throws RewriteError(kInvalidTimestamp) or RewriteError(kRelativeUrir).
std::string MakeUriM(std::string_view replay_base, std::string_view urir,
                     std::string_view timestamp14, Modifier modifier = Modifier::kNone);

// Throws kNotAUriM when `text` does not start with `replay_base` followed by
// digits, kInvalidTimestamp when the digit run is not a valid 14-digit
// datetime, kUnknownModifier for any other suffix and kRelativeUrir when the
// remainder is not absolute. The URI-R is kept verbatim.
UriM ParseUriM(std::string_view text, std::string_view replay_base);

}  // namespace adreplay::rewrite

#endif  // ADREPLAY_REWRITE_URIM_H_
