#include "adreplay/rewrite/html_rewriter.h"

#include <array>
#include <vector>

#include "adreplay/rewrite/css_rewriter.h"
#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"
#include "json.hpp"

namespace adreplay::rewrite {

namespace {

bool IsHtmlSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

bool IsAsciiAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool IsUtf16Label(std::string_view label) { return label.starts_with("utf-16"); }

// Labels whose bytes below 0x80 are plain ASCII in every position the
// tokenizer inspects.
bool IsLegacyAsciiCompatible(std::string_view label) {
  constexpr std::array<std::string_view, 14> kPrefixes = {
      "iso-8859", "iso8859", "latin", "windows-", "cp125", "us-ascii", "ascii",
      "shift_jis", "sjis", "euc-", "gb", "big5", "koi8", "macintosh"};
  for (std::string_view p : kPrefixes) {
    if (label.starts_with(p)) return true;
  }
  return false;
}

struct Attribute {
  std::string name;  // lowercased
  size_t value_begin = 0;
  size_t value_end = 0;
  bool has_value = false;
};

struct Replacement {
  size_t begin;
  size_t end;
  std::string text;
};

class HtmlRewriter {
 public:
  HtmlRewriter(std::string_view html, const RewriteContext& ctx)
      : in_(html), ctx_(ctx), base_(ctx.base_urir) {
    has_marker_ = html.find(kContextBlockId) != std::string_view::npos;
  }

  std::string Run() {
    out_.reserve(in_.size() + in_.size() / 4 + 256);
    while (pos_ < in_.size()) {
      const size_t lt = in_.find('<', pos_);
      if (lt == std::string_view::npos) {
        CopyTo(in_.size());
        break;
      }
      CopyTo(lt);
      const std::string_view rest = in_.substr(pos_);
      if (rest.starts_with("<!--")) {
        SkipComment();
      } else if (rest.starts_with("<!") || rest.starts_with("<?")) {
        const bool doctype = StartsWithIgnoreCase(rest, "<!doctype");
        CopyPast('>');
        if (doctype) doctype_end_ = out_.size();
      } else if (rest.size() > 2 && rest[1] == '/' && IsAsciiAlpha(rest[2])) {
        CopyPast('>');
      } else if (rest.size() > 1 && IsAsciiAlpha(rest[1])) {
        StartTag();
      } else {
        CopyTo(pos_ + 1);
      }
    }
    if (NeedsInjection()) {
      if (html_end_) {
        out_.insert(*html_end_, "<head>" + ShimBlock(ctx_) + "</head>");
      } else {
        out_.insert(doctype_end_, ShimBlock(ctx_));
      }
    }
    return std::move(out_);
  }

 private:
  bool NeedsInjection() const { return ctx_.inject_shim && !has_marker_ && !injected_; }

  void CopyTo(size_t end) {
    out_.append(in_.substr(pos_, end - pos_));
    pos_ = end;
  }

  void CopyPast(char c) {
    const size_t end = in_.find(c, pos_);
    CopyTo(end == std::string_view::npos ? in_.size() : end + 1);
  }

  void SkipComment() {
    // "<!-->" and "<!--->" close immediately.
    size_t end;
    if (in_.substr(pos_ + 4).starts_with(">")) {
      end = pos_ + 5;
    } else if (in_.substr(pos_ + 4).starts_with("->")) {
      end = pos_ + 6;
    } else {
      const size_t close = in_.find("-->", pos_ + 4);
      end = close == std::string_view::npos ? in_.size() : close + 3;
    }
    CopyTo(end);
  }

  // Position of "</name" (case-insensitive) at or after `from`, or the end.
  size_t RawTextEnd(std::string_view name, size_t from) const {
    const std::string close = "</" + std::string(name);
    size_t i = from;
    while (true) {
      i = FindIgnoreCase(in_, close, i);
      if (i == std::string_view::npos) return in_.size();
      const size_t after = i + close.size();
      if (after >= in_.size() || IsHtmlSpace(in_[after]) || in_[after] == '>' ||
          in_[after] == '/') {
        return i;
      }
      i = after;
    }
  }

  void StartTag() {
    const size_t tag_begin = pos_;
    size_t i = pos_ + 1;
    while (i < in_.size() && !IsHtmlSpace(in_[i]) && in_[i] != '/' && in_[i] != '>') ++i;
    const std::string name = AsciiLower(in_.substr(pos_ + 1, i - pos_ - 1));
    std::vector<Attribute> attrs;
    bool closed = false;
    while (i < in_.size()) {
      while (i < in_.size() && (IsHtmlSpace(in_[i]) || in_[i] == '/')) ++i;
      if (i >= in_.size()) break;
      if (in_[i] == '>') {
        ++i;
        closed = true;
        break;
      }
      const size_t name_begin = i;
      while (i < in_.size() && !IsHtmlSpace(in_[i]) && in_[i] != '/' && in_[i] != '>' &&
             !(in_[i] == '=' && i > name_begin)) {
        ++i;
      }
      Attribute attr;
      attr.name = AsciiLower(in_.substr(name_begin, i - name_begin));
      size_t j = i;
      while (j < in_.size() && IsHtmlSpace(in_[j])) ++j;
      if (j < in_.size() && in_[j] == '=') {
        i = j + 1;
        while (i < in_.size() && IsHtmlSpace(in_[i])) ++i;
        attr.has_value = true;
        if (i < in_.size() && (in_[i] == '"' || in_[i] == '\'')) {
          const size_t close = in_.find(in_[i], i + 1);
          attr.value_begin = i + 1;
          attr.value_end = close == std::string_view::npos ? in_.size() : close;
          i = close == std::string_view::npos ? in_.size() : close + 1;
        } else {
          attr.value_begin = i;
          while (i < in_.size() && !IsHtmlSpace(in_[i]) && in_[i] != '>') ++i;
          attr.value_end = i;
        }
      }
      attrs.push_back(std::move(attr));
    }
    if (!closed) {
      // Unterminated tag at end of input: pass it through.
      CopyTo(in_.size());
      return;
    }

    EmitTag(name, attrs, tag_begin, i);

    if (name == "head" && NeedsInjection()) {
      out_ += ShimBlock(ctx_);
      injected_ = true;
    } else if (name == "html" && !html_end_) {
      html_end_ = out_.size();
    }

    if (name == "script" || name == "xmp" || name == "iframe" || name == "noembed" ||
        name == "noframes" || name == "textarea" || name == "title") {
      CopyTo(RawTextEnd(name, pos_));
    } else if (name == "style") {
      const size_t end = RawTextEnd(name, pos_);
      out_ += RewriteCss(in_.substr(pos_, end - pos_), base_, ctx_);
      pos_ = end;
    } else if (name == "plaintext") {
      CopyTo(in_.size());
    }
  }

  std::string_view Value(const Attribute& a) const {
    return in_.substr(a.value_begin, a.value_end - a.value_begin);
  }

  const Attribute* Find(const std::vector<Attribute>& attrs, std::string_view name) const {
    for (const Attribute& a : attrs) {
      if (a.name == name && a.has_value) return &a;
    }
    return nullptr;
  }

  bool HasRelToken(const std::vector<Attribute>& attrs, std::string_view token) const {
    const Attribute* rel = Find(attrs, "rel");
    if (!rel) return false;
    for (std::string_view part : Split(Value(*rel), ' ')) {
      if (EqualsIgnoreCase(TrimWhitespace(part), token)) return true;
    }
    return false;
  }

  Modifier ModifierFor(std::string_view element, const std::vector<Attribute>& attrs) const {
    if (element == "script") return Modifier::kJs;
    if (element == "img") return Modifier::kIm;
    if (element == "iframe" || element == "frame") return Modifier::kIf;
    if (element == "link" && HasRelToken(attrs, "stylesheet")) return Modifier::kCs;
    return Modifier::kNone;
  }

  void EmitTag(const std::string& name, const std::vector<Attribute>& attrs, size_t begin,
               size_t end) {
    const Modifier modifier = ModifierFor(name, attrs);
    std::vector<Replacement> replacements;
    const auto replace = [&](const Attribute& a, std::optional<std::string> text) {
      if (text && *text != Value(a)) replacements.push_back({a.value_begin, a.value_end, *text});
    };

    // The injected shim script from an earlier pass stays as it is.
    const Attribute* src = Find(attrs, "src");
    const bool is_shim = name == "script" && src && Value(*src) == ctx_.shim_src;

    if (name == "base") {
      if (const Attribute* href = Find(attrs, "href"); href && !base_seen_) {
        base_seen_ = true;
        const std::string_view value = TrimWhitespace(Value(*href));
        if (!IsRewritten(value, ctx_) && !value.empty()) {
          try {
            base_ = ResolveReference(ctx_.base_urir, value);
          } catch (const std::exception&) {
          }
        }
      }
    }

    for (const Attribute& a : attrs) {
      if (!a.has_value || is_shim) continue;
      const std::string_view value = Value(a);
      if (a.name == "src" || a.name == "href" || a.name == "action" || a.name == "poster" ||
          (a.name == "data" && name == "object")) {
        const std::string& resolve_base = name == "base" ? ctx_.base_urir : base_;
        replace(a, RewriteUrlValue(value, resolve_base, modifier, ctx_));
      } else if (a.name == "srcset") {
        replace(a, RewriteSrcset(value, base_, modifier, ctx_));
      } else if (a.name == "style") {
        replace(a, RewriteCss(value, base_, ctx_));
      } else if (a.name == "content" && name == "meta") {
        const Attribute* equiv = Find(attrs, "http-equiv");
        if (equiv && EqualsIgnoreCase(TrimWhitespace(Value(*equiv)), "refresh")) {
          replace(a, RewriteRefresh(value));
        }
      }
    }

    size_t cursor = begin;
    for (const Replacement& r : replacements) {
      out_.append(in_.substr(cursor, r.begin - cursor));
      out_ += r.text;
      cursor = r.end;
    }
    out_.append(in_.substr(cursor, end - cursor));
    pos_ = end;
  }

  std::optional<std::string> RewriteRefresh(std::string_view content) const {
    const size_t url_at = FindIgnoreCase(content, "url");
    if (url_at == std::string_view::npos) return std::nullopt;
    size_t i = url_at + 3;
    while (i < content.size() && IsHtmlSpace(content[i])) ++i;
    if (i >= content.size() || content[i] != '=') return std::nullopt;
    ++i;
    while (i < content.size() && IsHtmlSpace(content[i])) ++i;
    size_t end = content.size();
    if (i < content.size() && (content[i] == '\'' || content[i] == '"')) {
      const size_t close = content.find(content[i], i + 1);
      ++i;
      end = close == std::string_view::npos ? content.size() : close;
    }
    const auto rewritten =
        RewriteUrlValue(content.substr(i, end - i), base_, Modifier::kNone, ctx_);
    if (!rewritten) return std::nullopt;
    return std::string(content.substr(0, i)) + *rewritten + std::string(content.substr(end));
  }

  std::string_view in_;
  const RewriteContext& ctx_;
  std::string base_;
  bool base_seen_ = false;
  bool has_marker_ = false;
  bool injected_ = false;
  std::optional<size_t> html_end_;
  size_t doctype_end_ = 0;
  size_t pos_ = 0;
  std::string out_;
};

std::optional<std::string> CharsetFromMeta(std::string_view head) {
  size_t i = 0;
  while ((i = FindIgnoreCase(head, "<meta", i)) != std::string_view::npos) {
    const size_t end = head.find('>', i);
    const std::string_view tag = head.substr(i, end == std::string_view::npos ? head.npos : end - i);
    i += 5;
    const size_t at = FindIgnoreCase(tag, "charset");
    if (at == std::string_view::npos) continue;
    size_t j = at + 7;
    while (j < tag.size() && IsHtmlSpace(tag[j])) ++j;
    if (j >= tag.size() || tag[j] != '=') continue;
    ++j;
    while (j < tag.size() && (IsHtmlSpace(tag[j]) || tag[j] == '"' || tag[j] == '\'')) ++j;
    size_t k = j;
    while (k < tag.size() && !IsHtmlSpace(tag[k]) && tag[k] != '"' && tag[k] != '\'' &&
           tag[k] != ';' && tag[k] != '/') {
      ++k;
    }
    if (k > j) return AsciiLower(tag.substr(j, k - j));
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> SniffCharset(std::string_view html,
                                        std::optional<std::string_view> http_charset) {
  if (html.starts_with("\xEF\xBB\xBF")) return "utf-8";
  if (html.starts_with("\xFE\xFF")) return "utf-16be";
  if (html.starts_with("\xFF\xFE")) return "utf-16le";
  if (http_charset && !TrimWhitespace(*http_charset).empty()) {
    return AsciiLower(TrimWhitespace(*http_charset));
  }
  auto meta = CharsetFromMeta(html.substr(0, 1024));
  // A document cannot declare a UTF-16 encoding from inside itself.
  if (meta && IsUtf16Label(*meta)) return "utf-8";
  return meta;
}

std::string SanitizeUtf8(std::string_view s) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
  while (i < s.size()) {
    const unsigned char c = byte(i);
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    }
    size_t need = 0;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c >= 0xC2 && c <= 0xDF) {
      need = 1;
    } else if (c >= 0xE0 && c <= 0xEF) {
      need = 2;
      if (c == 0xE0) lo = 0xA0;
      if (c == 0xED) hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      need = 3;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;
    } else {
      out += kReplacement;
      ++i;
      continue;
    }
    size_t k = 1;
    for (; k <= need && i + k < s.size(); ++k) {
      const unsigned char b = byte(i + k);
      if (k == 1 ? (b < lo || b > hi) : (b < 0x80 || b > 0xBF)) break;
    }
    if (k == need + 1) {
      out.append(s.substr(i, k));
    } else {
      out += kReplacement;
    }
    i += k;
  }
  return out;
}

std::string ShimBlock(const RewriteContext& ctx) {
  nlohmann::ordered_json context = {
      {"timestamp14", ctx.timestamp14},
      {"wombat_sec", ctx.wombat_sec},
      {"replay_base", ctx.replay_base},
  };
  std::string json;
  for (char c : context.dump()) {
    if (c == '<') {
      json += "\\u003c";
    } else {
      json += c;
    }
  }
  return "<script id=\"" + std::string(kContextBlockId) + "\" type=\"application/json\">" + json +
         "</script><script src=\"" + ctx.shim_src + "\"></script>";
}

std::string RewriteHtml(std::string_view html, const RewriteContext& ctx) {
  const auto charset = SniffCharset(html, ctx.charset);
  if (charset && IsUtf16Label(*charset)) return std::string(html);
  if (charset && IsLegacyAsciiCompatible(*charset)) return HtmlRewriter(html, ctx).Run();
  const std::string clean = SanitizeUtf8(html);
  return HtmlRewriter(clean, ctx).Run();
}

}  // namespace adreplay::rewrite
