#ifndef ADREPLAY_REWRITE_URL_REWRITE_H_
#define ADREPLAY_REWRITE_URL_REWRITE_H_

#include <optional>
#include <string>
#include <string_view>

#include "adreplay/rewrite/urim.h"

namespace adreplay::rewrite {

inline constexpr std::string_view kDefaultShimSrc = "/_shim/shim.js";
inline constexpr std::string_view kContextBlockId = "adreplay-context";

struct RewriteContext {
  std::string timestamp14;
  std::string wombat_sec;
  std::string base_urir;
  bool inject_shim = true;
  std::string replay_base;
  std::string shim_src = std::string(kDefaultShimSrc);
  // Charset from the HTTP Content-Type, if any; a meta declaration in the
  // document is used otherwise.
  std::optional<std::string> charset;
};

// Fills wombat_sec from the timestamp. Throws RewriteError(kInvalidTimestamp).
RewriteContext MakeRewriteContext(std::string_view base_urir, std::string_view timestamp14,
                                  std::string_view replay_base, bool inject_shim = true);

// The URI-M a document reference should point to, or nullopt when the value
// is left alone: empty values, fragments, about:/javascript:/data:/blob:/
// mailto:/tel: and other non-http schemes, values already under replay_base,
// and references that cannot be resolved.
std::optional<std::string> RewriteUrlValue(std::string_view value, std::string_view base,
                                           Modifier modifier, const RewriteContext& ctx);

// Same, for a srcset list; only the URL of each candidate is replaced.
std::string RewriteSrcset(std::string_view value, std::string_view base, Modifier modifier,
                          const RewriteContext& ctx);

// True when `value` already parses as a URI-M under ctx.replay_base.
bool IsRewritten(std::string_view value, const RewriteContext& ctx);

}  // namespace adreplay::rewrite

#endif  // ADREPLAY_REWRITE_URL_REWRITE_H_
