#include "adreplay/adscan/spn_blocklist.h"

#include <fstream>
#include <sstream>

#include "adreplay/adscan/classify.h"
#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"

namespace adreplay::adscan {

namespace {

const std::string* MatchToken(const std::vector<std::string>& tokens, std::string_view s) {
  for (const std::string& t : tokens) {
    if (EqualsIgnoreCase(t, s)) return &t;
  }
  return nullptr;
}

}  // namespace

std::string_view BlockReasonName(BlockReason reason) {
  switch (reason) {
    case BlockReason::kAdFileName: return "ad_file_name";
    case BlockReason::kAdDirectoryName: return "ad_directory_name";
    case BlockReason::kAdServiceHost: return "ad_service_host";
    case BlockReason::kNotBlocked: return "not_blocked";
  }
  return "not_blocked";
}

std::optional<BlockReason> ParseBlockReason(std::string_view name) {
  for (BlockReason r : {BlockReason::kAdFileName, BlockReason::kAdDirectoryName,
                        BlockReason::kAdServiceHost, BlockReason::kNotBlocked}) {
    if (BlockReasonName(r) == name) return r;
  }
  return std::nullopt;
}

SpnBlocklist SpnBlocklist::Default() {
  SpnBlocklist list;
  list.file_tokens_ = {"imgAd", "displayAds", "videoAd", "webAd"};
  list.directory_tokens_ = {"Advertisement_files", "displayAds", "videoAd", "webAd", "ads"};
  list.host_domains_ = {"googlesyndication.com", "doubleclick.net", "2mdn.net",
                        "amazon-adsystem.com"};
  return list;
}

SpnBlocklist SpnBlocklist::Parse(std::istream& in) {
  SpnBlocklist list;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line.substr(0, line.find('#')));
    std::string kind, token, extra;
    if (!(fields >> kind)) continue;
    if (!(fields >> token) || (fields >> extra)) {
      throw AdScanError(AdScanError::Kind::kBadBlocklist,
                        "blocklist line " + std::to_string(line_no) + ": expected '<kind> <token>'");
    }
    if (kind == "file") {
      list.file_tokens_.push_back(token);
    } else if (kind == "dir") {
      list.directory_tokens_.push_back(token);
    } else if (kind == "host") {
      list.host_domains_.push_back(AsciiLower(token));
    } else {
      throw AdScanError(AdScanError::Kind::kBadBlocklist,
                        "blocklist line " + std::to_string(line_no) + ": unknown kind '" + kind + "'");
    }
  }
  return list;
}

SpnBlocklist SpnBlocklist::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw AdScanError(AdScanError::Kind::kBadBlocklist, "cannot open " + path.string());
  return Parse(in);
}

BlockVerdict SpnBlocklist::Check(std::string_view url) const {
  if (!IsHttpUrl(url)) {
    throw AdScanError(AdScanError::Kind::kNotAbsoluteUrl,
                      "not an absolute http(s) URL: '" + std::string(url) + "'");
  }
  const UriReference ref = SplitUriReference(url);
  BlockVerdict v;
  v.url = std::string(url);
  const auto block = [&](BlockReason reason, std::string token) {
    v.blocked = true;
    v.reason = reason;
    v.matched_token = std::move(token);
    return v;
  };

  std::vector<std::string_view> segments = Split(ref.path, '/');
  if (!segments.empty() && segments.front().empty()) segments.erase(segments.begin());
  if (!segments.empty()) {
    const std::string_view last = segments.back();
    const size_t dot = last.find('.');
    if (dot != std::string_view::npos && dot + 1 < last.size()) {
      if (const std::string* t = MatchToken(file_tokens_, last.substr(0, dot))) {
        return block(BlockReason::kAdFileName, *t);
      }
    }
    for (size_t i = 0; i + 1 < segments.size(); ++i) {
      if (const std::string* t = MatchToken(directory_tokens_, segments[i])) {
        return block(BlockReason::kAdDirectoryName, *t);
      }
    }
  }

  const std::string host = AsciiLower(SplitAuthority(*ref.authority).host);
  for (const std::string& domain : host_domains_) {
    if (host == domain ||
        (host.size() > domain.size() && host.ends_with(domain) &&
         host[host.size() - domain.size() - 1] == '.')) {
      return block(BlockReason::kAdServiceHost, domain);
    }
  }
  return v;
}

}  // namespace adreplay::adscan
