#include "adreplay/cdx/cdxj.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <vector>

#include "adreplay/cdx/canonical_url.h"
#include "json.hpp"

namespace adreplay::cdx {

std::string FormatCdxjLine(const CdxEntry& entry) {
  nlohmann::json payload = {
      {"url", entry.original_uri},       {"status", entry.status},
      {"mime", entry.mime},              {"source", entry.source_id},
      {"offset", entry.offset},          {"length", entry.length},
      {"digest", entry.digest},
  };
  if (entry.revisit) payload["revisit"] = entry.unresolved_revisit ? "unresolved" : "resolved";
  return entry.key + " " + entry.timestamp.text() + " " + payload.dump();
}

void SaveCdxj(const CaptureIndex& index, std::ostream& out) {
  std::vector<std::string> lines;
  lines.reserve(index.size());
  for (const CdxEntry& e : index.entries()) lines.push_back(FormatCdxjLine(e));
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) out << line << '\n';
}

CaptureIndex LoadCdxj(std::istream& in) {
  std::vector<CdxEntry> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto bad = [&](const std::string& why) {
      return CdxError(CdxError::Kind::kBadCdxj,
                      "CDXJ line " + std::to_string(line_no) + ": " + why);
    };
    const size_t sp1 = line.find(' ');
    const size_t sp2 = sp1 == std::string::npos ? sp1 : line.find(' ', sp1 + 1);
    if (sp2 == std::string::npos) throw bad("expected 'key timestamp {json}'");
    CdxEntry entry;
    entry.key = line.substr(0, sp1);
    const auto ts = Timestamp14::Parse(std::string_view(line).substr(sp1 + 1, sp2 - sp1 - 1));
    if (!ts) throw bad("invalid timestamp");
    entry.timestamp = *ts;
    try {
      const auto payload = nlohmann::json::parse(line.substr(sp2 + 1));
      entry.original_uri = payload.at("url").get<std::string>();
      entry.status = payload.at("status").get<int>();
      entry.mime = payload.at("mime").get<std::string>();
      entry.source_id = payload.at("source").get<std::string>();
      entry.offset = payload.at("offset").get<std::uint64_t>();
      entry.length = payload.at("length").get<std::uint64_t>();
      entry.digest = payload.at("digest").get<std::string>();
      if (payload.contains("revisit")) {
        entry.revisit = true;
        entry.unresolved_revisit = payload.at("revisit").get<std::string>() == "unresolved";
      }
    } catch (const nlohmann::json::exception& e) {
      throw bad(e.what());
    }
    entries.push_back(std::move(entry));
  }
  return CaptureIndex(std::move(entries));
}

}  // namespace adreplay::cdx
