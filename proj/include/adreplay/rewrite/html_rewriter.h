#ifndef ADREPLAY_REWRITE_HTML_REWRITER_H_
#define ADREPLAY_REWRITE_HTML_REWRITER_H_

#include <optional>
#include <string>
#include <string_view>

#include "adreplay/rewrite/url_rewrite.h"

namespace adreplay::rewrite {

// Rewrites src, href, srcset, action, poster and object data attributes to
// URI-Ms (script -> js_, stylesheet link -> cs_, img -> im_, iframe/frame ->
// if_, otherwise no modifier), rewrites inline CSS, and when ctx.inject_shim
// is set places the context block and shim script as the first child of
// head. Bytes outside rewritten values are copied unchanged. Script bodies
// are never touched.
std::string RewriteHtml(std::string_view html, const RewriteContext& ctx);

// The injected markup: a JSON context block followed by the shim script.
std::string ShimBlock(const RewriteContext& ctx);

// Lowercased charset label from a BOM, the given HTTP charset, or a meta
// declaration in the first 1024 bytes; nullopt when none is found.
std::optional<std::string> SniffCharset(std::string_view html,
                                        std::optional<std::string_view> http_charset);

// Replaces each maximal ill-formed UTF-8 subsequence with U+FFFD.
std::string SanitizeUtf8(std::string_view bytes);

}  // namespace adreplay::rewrite

#endif  // ADREPLAY_REWRITE_HTML_REWRITER_H_
