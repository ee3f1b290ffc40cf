#ifndef ADREPLAY_ADSCAN_SPN_BLOCKLIST_H_
#define ADREPLAY_ADSCAN_SPN_BLOCKLIST_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adreplay::adscan {

enum class BlockReason { kAdFileName, kAdDirectoryName, kAdServiceHost, kNotBlocked };

std::string_view BlockReasonName(BlockReason reason);
std::optional<BlockReason> ParseBlockReason(std::string_view name);

struct BlockVerdict {
  std::string url;
  bool blocked = false;
  BlockReason reason = BlockReason::kNotBlocked;
  std::string matched_token;

  bool operator==(const BlockVerdict&) const = default;
};

// Simulates the observed Save Page Now ad filtering:
//  - the last path segment is an ad token followed by a file extension
//    (an ad token with no extension is let through);
//  - any earlier path segment equals a directory token;
//  - the host is, or is under, a known ad-service domain.
// Tokens compare case-insensitively and are checked in that order.
class SpnBlocklist {
 public:
  static SpnBlocklist Default();

  // Lines of `file <token>`, `dir <token>` or `host <domain>`; '#' starts a
  // comment. Throws AdScanError(kBadBlocklist).
  static SpnBlocklist Parse(std::istream& in);
  static SpnBlocklist LoadFile(const std::filesystem::path& path);

  // Throws AdScanError(kNotAbsoluteUrl) for anything but absolute http(s).
  BlockVerdict Check(std::string_view url) const;

  const std::vector<std::string>& file_tokens() const { return file_tokens_; }
  const std::vector<std::string>& directory_tokens() const { return directory_tokens_; }
  const std::vector<std::string>& host_domains() const { return host_domains_; }

 private:
  std::vector<std::string> file_tokens_;
  std::vector<std::string> directory_tokens_;
  std::vector<std::string> host_domains_;
};

}  // namespace adreplay::adscan

#endif  // ADREPLAY_ADSCAN_SPN_BLOCKLIST_H_
