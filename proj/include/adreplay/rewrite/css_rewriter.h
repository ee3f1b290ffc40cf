#ifndef ADREPLAY_REWRITE_CSS_REWRITER_H_
#define ADREPLAY_REWRITE_CSS_REWRITER_H_

#include <string>
#include <string_view>

#include "adreplay/rewrite/url_rewrite.h"

namespace adreplay::rewrite {

// Rewrites url(...) targets with im_ and @import targets with cs_. Comments
// and string literals elsewhere are copied untouched. Relative references
// resolve against `base`.
std::string RewriteCss(std::string_view css, std::string_view base, const RewriteContext& ctx);

inline std::string RewriteCss(std::string_view css, const RewriteContext& ctx) {
  return RewriteCss(css, ctx.base_urir, ctx);
}

}  // namespace adreplay::rewrite

#endif  // ADREPLAY_REWRITE_CSS_REWRITER_H_
