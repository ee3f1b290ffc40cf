#ifndef ADREPLAY_FUZZY_RESOLVER_H_
#define ADREPLAY_FUZZY_RESOLVER_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adreplay/cdx/capture_index.h"
#include "adreplay/fuzzy/fuzzy_rule.h"
#include "adreplay/util/timestamp.h"

namespace adreplay::fuzzy {

inline constexpr std::string_view kExactRule = "exact";

struct Resolution {
  cdx::CdxEntry entry;
  std::string rule_used;  // "exact" or a rule name
  size_t candidates_considered = 0;

  bool operator==(const Resolution&) const = default;
};

struct RuleAttempt {
  std::string rule;
  size_t candidates = 0;

  bool operator==(const RuleAttempt&) const = default;
};

struct ResolveOutcome {
  std::optional<Resolution> resolution;
  // Every rule consulted, in order, with its candidate count. Starts with
  // "exact".
  std::vector<RuleAttempt> attempts;
};

// Picks among candidates: preferred entries first, then nearest timestamp,
// then the earlier capture, then the smallest original_uri, then index order.
const cdx::CdxEntry* PickCandidate(const std::vector<const cdx::CdxEntry*>& candidates,
                                   const Timestamp14& ts);

class Resolver {
 public:
  // Rules are run in ascending priority; priorities must be unique.
  explicit Resolver(std::shared_ptr<const cdx::CaptureIndex> index,
                    std::vector<FuzzyRule> rules = BuiltinRules());

  ResolveOutcome TryResolve(std::string_view url, const Timestamp14& ts,
                            std::optional<std::string_view> referrer = std::nullopt) const;

  // Throws FuzzyError(kNotFound) once every rule is exhausted and
  // cdx::CdxError(kNotAbsoluteUrl) for unusable URLs.
  Resolution Resolve(std::string_view url, const Timestamp14& ts,
                     std::optional<std::string_view> referrer = std::nullopt) const;

  const cdx::CaptureIndex& index() const { return *index_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }

 private:
  using Bucket = std::unordered_map<std::string, std::vector<size_t>>;

  std::vector<const cdx::CdxEntry*> Candidates(size_t rule_index, const cdx::CanonicalUrl& url,
                                               std::optional<std::string_view> referrer) const;

  std::shared_ptr<const cdx::CaptureIndex> index_;
  std::vector<FuzzyRule> rules_;
  std::vector<Bucket> buckets_;  // parallel to rules_, empty for search rules
};

}  // namespace adreplay::fuzzy

#endif  // ADREPLAY_FUZZY_RESOLVER_H_
