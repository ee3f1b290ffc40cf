#ifndef ADREPLAY_ADSCAN_SCAN_REPORT_H_
#define ADREPLAY_ADSCAN_SCAN_REPORT_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/adscan/classify.h"
#include "adreplay/adscan/spn_blocklist.h"
#include "adreplay/cdx/capture_index.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::adscan {

struct ScanReport {
  size_t captures = 0;
  // Every service and ad type appears, zero counts included.
  std::map<std::string, size_t> service_counts;
  std::map<std::string, size_t> type_counts;
  // One verdict per distinct captured URL, sorted by URL.
  std::vector<BlockVerdict> verdicts;

  std::string ToJson() const;
  std::string ToText() const;
  // Throws AdScanError(kBadReport).
  static ScanReport FromJson(std::string_view text);

  bool operator==(const ScanReport&) const = default;
};

ScanReport BuildScanReport(const cdx::CaptureIndex& index, const SpnBlocklist& blocklist);

// Opens a WARC (plain or gzip) or WACZ by content. Throws warc::WarcError
// when any part of the archive fails to parse.
std::vector<warc::ArchiveSource> OpenArchive(const std::filesystem::path& path);

ScanReport ScanArchive(const std::filesystem::path& path, const SpnBlocklist& blocklist);

}  // namespace adreplay::adscan

#endif  // ADREPLAY_ADSCAN_SCAN_REPORT_H_
