#include "adreplay/adscan/scan_report.h"

#include <fstream>
#include <set>

#include "adreplay/warc/wacz.h"
#include "json.hpp"

namespace adreplay::adscan {

namespace {

using nlohmann::ordered_json;

bool LooksLikeZip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string_view(magic, 4) == "PK\x03\x04";
}

}  // namespace

ScanReport BuildScanReport(const cdx::CaptureIndex& index, const SpnBlocklist& blocklist) {
  ScanReport report;
  for (AdService s : kAllServices) report.service_counts[std::string(ServiceName(s))] = 0;
  for (AdType t : kAllAdTypes) report.type_counts[std::string(AdTypeName(t))] = 0;
  std::set<std::string> urls;
  for (const cdx::CdxEntry& e : index.entries()) {
    const AdResource r = ClassifyResource(e);
    ++report.captures;
    ++report.service_counts[std::string(ServiceName(r.service))];
    ++report.type_counts[std::string(AdTypeName(r.ad_type))];
    urls.insert(e.original_uri);
  }
  for (const std::string& url : urls) {
    try {
      report.verdicts.push_back(blocklist.Check(url));
    } catch (const AdScanError&) {
      // Not an http(s) URL; nothing Save Page Now would be asked to fetch.
    }
  }
  return report;
}

std::string ScanReport::ToJson() const {
  ordered_json verdict_rows = ordered_json::array();
  for (const BlockVerdict& v : verdicts) {
    verdict_rows.push_back({{"url", v.url},
                            {"blocked", v.blocked},
                            {"reason", BlockReasonName(v.reason)},
                            {"matched_token", v.matched_token}});
  }
  const ordered_json doc = {
      {"captures", captures},
      {"service_counts", service_counts},
      {"type_counts", type_counts},
      {"verdicts", verdict_rows},
  };
  return doc.dump(2) + "\n";
}

ScanReport ScanReport::FromJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    ScanReport report;
    report.captures = doc.at("captures").get<size_t>();
    report.service_counts = doc.at("service_counts").get<std::map<std::string, size_t>>();
    report.type_counts = doc.at("type_counts").get<std::map<std::string, size_t>>();
    for (const auto& row : doc.at("verdicts")) {
      BlockVerdict v;
      v.url = row.at("url").get<std::string>();
      v.blocked = row.at("blocked").get<bool>();
      const auto reason = ParseBlockReason(row.at("reason").get<std::string>());
      if (!reason) throw AdScanError(AdScanError::Kind::kBadReport, "unknown reason");
      v.reason = *reason;
      v.matched_token = row.at("matched_token").get<std::string>();
      if (v.blocked != (v.reason != BlockReason::kNotBlocked)) {
        throw AdScanError(AdScanError::Kind::kBadReport, "verdict flag disagrees with reason");
      }
      report.verdicts.push_back(std::move(v));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw AdScanError(AdScanError::Kind::kBadReport, std::string("bad report: ") + e.what());
  }
}

std::string ScanReport::ToText() const {
  std::string out = "captures: " + std::to_string(captures) + "\n\nservices\n";
  for (const auto& [name, n] : service_counts) out += "  " + name + ": " + std::to_string(n) + "\n";
  out += "\nad types\n";
  for (const auto& [name, n] : type_counts) out += "  " + name + ": " + std::to_string(n) + "\n";
  out += "\nsave page now verdicts\n";
  for (const BlockVerdict& v : verdicts) {
    out += v.blocked ? "  BLOCKED " : "  allowed ";
    out += std::string(BlockReasonName(v.reason));
    if (!v.matched_token.empty()) out += " (" + v.matched_token + ")";
    out += " " + v.url + "\n";
  }
  return out;
}

std::vector<warc::ArchiveSource> OpenArchive(const std::filesystem::path& path) {
  if (LooksLikeZip(path)) return warc::OpenWacz(path);
  return {warc::OpenWarcFile(path)};
}

ScanReport ScanArchive(const std::filesystem::path& path, const SpnBlocklist& blocklist) {
  const std::vector<warc::ArchiveSource> sources = OpenArchive(path);
  cdx::BuildResult built = cdx::BuildIndex(sources);
  if (!built.failures.empty()) {
    throw warc::WarcError(warc::WarcError::Kind::kIoFailure,
                          built.failures.front().source_id + ": " + built.failures.front().error);
  }
  return BuildScanReport(built.index, blocklist);
}

}  // namespace adreplay::adscan
