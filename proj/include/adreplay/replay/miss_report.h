#ifndef ADREPLAY_REPLAY_MISS_REPORT_H_
#define ADREPLAY_REPLAY_MISS_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

#include "adreplay/cdx/capture_index.h"
#include "adreplay/fuzzy/resolver.h"

namespace adreplay::replay {

inline constexpr size_t kMaxNearestKeys = 5;

// Body of a 404 for a memento that no rule could resolve.
//
//   {"requested_urir": "...", "ts": "...",
//    "rules_tried": [{"rule": "exact", "candidates": 0}, ...],
//    "nearest_keys": ["...", ...]}
struct MissReport {
  std::string requested_urir;
  std::string ts;
  std::vector<fuzzy::RuleAttempt> rules_tried;
  std::vector<std::string> nearest_keys;

  std::string ToJson() const;
  // Throws std::invalid_argument on malformed input.
  static MissReport FromJson(std::string_view text);

  bool operator==(const MissReport&) const = default;
};

// Up to kMaxNearestKeys distinct index keys closest to `key` in sort order,
// returned sorted.
std::vector<std::string> NearestKeys(const cdx::CaptureIndex& index, std::string_view key);

}  // namespace adreplay::replay

#endif  // ADREPLAY_REPLAY_MISS_REPORT_H_
