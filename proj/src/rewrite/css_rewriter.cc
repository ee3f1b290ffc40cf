#include "adreplay/rewrite/css_rewriter.h"

#include "adreplay/util/strings.h"

namespace adreplay::rewrite {

namespace {

bool IsCssSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool IsIdentChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || IsAsciiDigit(c) || c == '-' ||
         c == '_' || c == '\\' || static_cast<unsigned char>(c) >= 0x80;
}

class CssRewriter {
 public:
  CssRewriter(std::string_view css, std::string_view base, const RewriteContext& ctx)
      : in_(css), base_(base), ctx_(ctx) {}

  std::string Run() {
    out_.reserve(in_.size() + in_.size() / 4);
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (c == '/' && At("/*")) {
        const size_t end = in_.find("*/", pos_ + 2);
        CopyTo(end == std::string_view::npos ? in_.size() : end + 2);
      } else if (c == '"' || c == '\'') {
        CopyTo(StringEnd(pos_));
      } else if (c == '@' && StartsWithIgnoreCase(in_.substr(pos_), "@import") &&
                 !IsIdentAt(pos_ + 7)) {
        CopyTo(pos_ + 7);
        SkipSpace();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          RewriteString(Modifier::kCs);
        } else if (AtUrlFunction()) {
          RewriteUrlFunction(Modifier::kCs);
        }
      } else if ((c == 'u' || c == 'U') && AtUrlFunction() &&
                 (pos_ == 0 || !IsIdentChar(in_[pos_ - 1]))) {
        RewriteUrlFunction(Modifier::kIm);
      } else {
        out_ += c;
        ++pos_;
      }
    }
    return std::move(out_);
  }

 private:
  bool At(std::string_view s) const { return in_.substr(pos_).starts_with(s); }
  bool IsIdentAt(size_t i) const { return i < in_.size() && IsIdentChar(in_[i]); }
  bool AtUrlFunction() const { return StartsWithIgnoreCase(in_.substr(pos_), "url("); }

  void CopyTo(size_t end) {
    out_.append(in_.substr(pos_, end - pos_));
    pos_ = end;
  }

  void SkipSpace() {
    size_t end = pos_;
    while (end < in_.size() && IsCssSpace(in_[end])) ++end;
    CopyTo(end);
  }

  // Index one past the closing quote of the string starting at `start`. An
  // unterminated string stops before the newline.
  size_t StringEnd(size_t start) const {
    const char quote = in_[start];
    size_t i = start + 1;
    while (i < in_.size()) {
      if (in_[i] == '\\') {
        i += 2;
        continue;
      }
      if (in_[i] == quote) return i + 1;
      if (in_[i] == '\n') return i;
      ++i;
    }
    return in_.size();
  }

  void Emit(std::string_view url, Modifier modifier) {
    const auto rewritten = RewriteUrlValue(url, base_, modifier, ctx_);
    out_ += rewritten ? std::string_view(*rewritten) : url;
  }

  void RewriteString(Modifier modifier) {
    const size_t end = StringEnd(pos_);
    const bool closed = end > pos_ + 1 && end <= in_.size() && in_[end - 1] == in_[pos_];
    const size_t content_end = closed ? end - 1 : end;
    out_ += in_[pos_];
    const std::string_view content = in_.substr(pos_ + 1, content_end - pos_ - 1);
    if (content.find('\\') == std::string_view::npos) {
      Emit(content, modifier);
    } else {
      out_.append(content);
    }
    pos_ = content_end;
    CopyTo(end);
  }

  void RewriteUrlFunction(Modifier modifier) {
    CopyTo(pos_ + 4);
    SkipSpace();
    if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
      RewriteString(modifier);
      return;
    }
    size_t end = pos_;
    while (end < in_.size() && in_[end] != ')') ++end;
    size_t content_end = end;
    while (content_end > pos_ && IsCssSpace(in_[content_end - 1])) --content_end;
    const std::string_view content = in_.substr(pos_, content_end - pos_);
    if (content.find('\\') == std::string_view::npos) {
      Emit(content, modifier);
    } else {
      out_.append(content);
    }
    pos_ = content_end;
  }

  std::string_view in_;
  std::string_view base_;
  const RewriteContext& ctx_;
  size_t pos_ = 0;
  std::string out_;
};

}  // namespace

std::string RewriteCss(std::string_view css, std::string_view base, const RewriteContext& ctx) {
  return CssRewriter(css, base, ctx).Run();
}

}  // namespace adreplay::rewrite
