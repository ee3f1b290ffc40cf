#include "adreplay/replay/miss_report.h"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace adreplay::replay {

using nlohmann::ordered_json;

std::string MissReport::ToJson() const {
  ordered_json rules = ordered_json::array();
  for (const fuzzy::RuleAttempt& a : rules_tried) {
    rules.push_back({{"rule", a.rule}, {"candidates", a.candidates}});
  }
  const ordered_json doc = {
      {"requested_urir", requested_urir},
      {"ts", ts},
      {"rules_tried", rules},
      {"nearest_keys", nearest_keys},
  };
  return doc.dump(2) + "\n";
}

MissReport MissReport::FromJson(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    MissReport report;
    report.requested_urir = doc.at("requested_urir").get<std::string>();
    report.ts = doc.at("ts").get<std::string>();
    for (const auto& r : doc.at("rules_tried")) {
      report.rules_tried.push_back({r.at("rule").get<std::string>(),
                                    r.at("candidates").get<size_t>()});
    }
    report.nearest_keys = doc.at("nearest_keys").get<std::vector<std::string>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad miss report: ") + e.what());
  }
}

std::vector<std::string> NearestKeys(const cdx::CaptureIndex& index, std::string_view key) {
  const auto entries = index.entries();
  const size_t at = index.LowerBound(key);
  std::vector<std::string> before, after;
  // Walk outward from the insertion point, one distinct key at a time.
  size_t left = at, right = at;
  bool take_right = true;
  while (before.size() + after.size() < kMaxNearestKeys && (left > 0 || right < entries.size())) {
    if ((take_right && right < entries.size()) || left == 0) {
      const std::string& k = entries[right].key;
      after.push_back(k);
      while (right < entries.size() && entries[right].key == k) ++right;
    } else {
      const std::string& k = entries[left - 1].key;
      before.push_back(k);
      while (left > 0 && entries[left - 1].key == k) --left;
    }
    take_right = !take_right;
  }
  std::reverse(before.begin(), before.end());
  before.insert(before.end(), after.begin(), after.end());
  return before;
}

}  // namespace adreplay::replay
