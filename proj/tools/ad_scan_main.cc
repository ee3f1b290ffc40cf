// ad-scan: find, classify and report advertisements inside web archives.
//
//   ad-scan gallery <warc> <seed-url> [--out DIR] [--replay-base URL]
//   ad-scan report <archive> [--format text|json] [--blocklist FILE]
//   ad-scan spn-check <url>... [--format text|json] [--blocklist FILE]
//
// Exit codes: 0 success, 1 parse failure, 2 bad arguments.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adreplay/adscan/gallery.h"
#include "adreplay/adscan/scan_report.h"
#include "adreplay/adscan/spn_blocklist.h"
#include "adreplay/cdx/canonical_url.h"
#include "adreplay/util/url.h"
#include "adreplay/warc/capture_record.h"
#include "json.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kParseFailure = 1;
constexpr int kBadArguments = 2;

using adreplay::adscan::SpnBlocklist;

SpnBlocklist LoadBlocklist(const std::string& path) {
  return path.empty() ? SpnBlocklist::Default() : SpnBlocklist::LoadFile(path);
}

int RunGallery(const std::string& warc, const std::string& seed, const std::string& out,
               const std::string& replay_base) {
  if (!adreplay::IsHttpUrl(seed)) {
    std::cerr << "ad-scan: seed URL must be an absolute http(s) URL: " << seed << "\n";
    return kBadArguments;
  }
  if (replay_base.empty() || replay_base.back() != '/') {
    std::cerr << "ad-scan: --replay-base must end with '/'\n";
    return kBadArguments;
  }
  try {
    const auto gallery = adreplay::adscan::EmitGallery(warc, seed, out, replay_base);
    std::cout << gallery.items.size() << " candidate(s) written to " << out << "\n";
    return kOk;
  } catch (const adreplay::warc::WarcError& e) {
    std::cerr << "ad-scan: " << warc << ": " << e.what() << "\n";
    return kParseFailure;
  }
}

int RunReport(const std::string& archive, const std::string& format,
              const std::string& blocklist_path) {
  SpnBlocklist blocklist;
  try {
    blocklist = LoadBlocklist(blocklist_path);
  } catch (const adreplay::adscan::AdScanError& e) {
    std::cerr << "ad-scan: " << e.what() << "\n";
    return kBadArguments;
  }
  try {
    const auto report = adreplay::adscan::ScanArchive(archive, blocklist);
    std::cout << (format == "json" ? report.ToJson() : report.ToText());
    return kOk;
  } catch (const adreplay::warc::WarcError& e) {
    std::cerr << "ad-scan: " << archive << ": " << e.what() << "\n";
    return kParseFailure;
  }
}

int RunSpnCheck(const std::vector<std::string>& urls, const std::string& format,
                const std::string& blocklist_path) {
  SpnBlocklist blocklist;
  std::vector<adreplay::adscan::BlockVerdict> verdicts;
  try {
    blocklist = LoadBlocklist(blocklist_path);
    for (const std::string& url : urls) verdicts.push_back(blocklist.Check(url));
  } catch (const adreplay::adscan::AdScanError& e) {
    std::cerr << "ad-scan: " << e.what() << "\n";
    return kBadArguments;
  }
  if (format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) {
      rows.push_back({{"url", v.url},
                      {"blocked", v.blocked},
                      {"reason", adreplay::adscan::BlockReasonName(v.reason)},
                      {"matched_token", v.matched_token}});
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    for (const auto& v : verdicts) {
      std::cout << (v.blocked ? "BLOCKED" : "allowed") << "\t"
                << adreplay::adscan::BlockReasonName(v.reason) << "\t"
                << (v.matched_token.empty() ? "-" : v.matched_token) << "\t" << v.url << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find and classify advertisements in web archives"};
  app.require_subcommand(1);

  std::string warc, seed, out = "gallery",
                          replay_base(adreplay::adscan::kDefaultGalleryReplayBase);
  auto* gallery = app.add_subcommand("gallery", "Write a static gallery of archived ad candidates");
  gallery->add_option("warc", warc, "WARC file")->required();
  gallery->add_option("seed-url", seed, "URI-R of the containing page")->required();
  gallery->add_option("--out", out, "Output directory");
  gallery->add_option("--replay-base", replay_base, "Replay service prefix for item links");

  std::string archive, format = "text", blocklist;
  auto* report = app.add_subcommand("report", "Summarize ad services and Save Page Now verdicts");
  report->add_option("archive", archive, "WARC or WACZ file")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  report->add_option("--blocklist", blocklist, "Blocklist file replacing the built-in table");

  std::vector<std::string> urls;
  std::string spn_format = "text";
  auto* spn = app.add_subcommand("spn-check", "Simulate Save Page Now ad blocking for URLs");
  spn->add_option("url", urls, "URLs to check")->required();
  spn->add_option("--format", spn_format)->check(CLI::IsMember({"text", "json"}));
  spn->add_option("--blocklist", blocklist, "Blocklist file replacing the built-in table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadArguments;
  }

  if (gallery->parsed()) return RunGallery(warc, seed, out, replay_base);
  if (report->parsed()) return RunReport(archive, format, blocklist);
  return RunSpnCheck(urls, spn_format, blocklist);
}
