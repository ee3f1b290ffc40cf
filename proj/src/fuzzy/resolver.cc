#include "adreplay/fuzzy/resolver.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace adreplay::fuzzy {

namespace {

// Key an indexed entry files under for a key-rewriting rule. Entries that
// already lack the volatile part file under their own key.
std::optional<std::string> BucketKey(const FuzzyRule& rule, const cdx::CanonicalUrl& url) {
  if (!RuleApplies(rule, url)) return std::nullopt;
  if (auto alternate = DeriveAlternateKey(rule, url)) return alternate;
  switch (rule.transform) {
    case TransformKind::kStripParam:
    case TransformKind::kStripQuery:
      return url.key();
    default:
      return std::nullopt;
  }
}

}  // namespace

const cdx::CdxEntry* PickCandidate(const std::vector<const cdx::CdxEntry*>& candidates,
                                   const Timestamp14& ts) {
  const bool any_preferred = std::any_of(candidates.begin(), candidates.end(),
                                         [](const cdx::CdxEntry* e) { return e->preferred(); });
  const cdx::CdxEntry* best = nullptr;
  auto rank = [&](const cdx::CdxEntry* e) {
    return std::make_tuple(SecondsBetween(e->timestamp, ts), e->timestamp.epoch_seconds(),
                           std::string_view(e->original_uri));
  };
  for (const cdx::CdxEntry* e : candidates) {
    if (any_preferred && !e->preferred()) continue;
    if (best == nullptr || rank(e) < rank(best)) best = e;
  }
  return best;
}

Resolver::Resolver(std::shared_ptr<const cdx::CaptureIndex> index, std::vector<FuzzyRule> rules)
    : index_(std::move(index)), rules_(std::move(rules)) {
  if (!index_) index_ = std::make_shared<const cdx::CaptureIndex>();
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const FuzzyRule& a, const FuzzyRule& b) { return a.priority < b.priority; });
  std::set<int> priorities;
  for (const FuzzyRule& rule : rules_) {
    if (!priorities.insert(rule.priority).second) {
      throw FuzzyError(FuzzyError::Kind::kBadRuleConfig,
                       "duplicate priority " + std::to_string(rule.priority));
    }
  }
  buckets_.resize(rules_.size());
  const auto entries = index_->entries();
  std::string previous_key;
  std::optional<cdx::CanonicalUrl> url;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (!url || entries[i].key != previous_key) {
      previous_key = entries[i].key;
      try {
        url = cdx::Canonicalize(previous_key);
      } catch (const cdx::CdxError&) {
        url.reset();
        continue;
      }
    }
    for (size_t r = 0; r < rules_.size(); ++r) {
      if (rules_[r].transform == TransformKind::kReferrerAdId) continue;
      if (auto key = BucketKey(rules_[r], *url)) buckets_[r][*key].push_back(i);
    }
  }
}

std::vector<const cdx::CdxEntry*> Resolver::Candidates(
    size_t rule_index, const cdx::CanonicalUrl& url,
    std::optional<std::string_view> referrer) const {
  const FuzzyRule& rule = rules_[rule_index];
  std::vector<const cdx::CdxEntry*> out;
  const auto entries = index_->entries();
  if (rule.transform == TransformKind::kReferrerAdId) {
    std::optional<SearchSpec> spec;
    try {
      spec = DeriveSearchSpec(rule, url, referrer);
    } catch (const FuzzyError&) {
      return out;
    }
    if (!spec) return out;
    for (const cdx::CdxEntry& e : index_->EntriesWithPrefix(spec->host + "/")) {
      if (spec->Matches(e.key)) out.push_back(&e);
    }
    return out;
  }
  const auto key = DeriveAlternateKey(rule, url);
  if (!key) return out;
  const auto it = buckets_[rule_index].find(*key);
  if (it == buckets_[rule_index].end()) return out;
  for (size_t i : it->second) out.push_back(&entries[i]);
  return out;
}

ResolveOutcome Resolver::TryResolve(std::string_view url, const Timestamp14& ts,
                                    std::optional<std::string_view> referrer) const {
  const cdx::CanonicalUrl canonical = cdx::Canonicalize(url);
  ResolveOutcome outcome;

  std::vector<const cdx::CdxEntry*> exact;
  for (const cdx::CdxEntry& e : index_->EntriesForKey(canonical.key())) exact.push_back(&e);
  outcome.attempts.push_back({std::string(kExactRule), exact.size()});
  if (!exact.empty()) {
    outcome.resolution = Resolution{*PickCandidate(exact, ts), std::string(kExactRule), exact.size()};
    return outcome;
  }

  for (size_t r = 0; r < rules_.size(); ++r) {
    const auto candidates = Candidates(r, canonical, referrer);
    outcome.attempts.push_back({rules_[r].name, candidates.size()});
    if (!candidates.empty()) {
      outcome.resolution = Resolution{*PickCandidate(candidates, ts), rules_[r].name,
                                      candidates.size()};
      return outcome;
    }
  }
  return outcome;
}

Resolution Resolver::Resolve(std::string_view url, const Timestamp14& ts,
                             std::optional<std::string_view> referrer) const {
  ResolveOutcome outcome = TryResolve(url, ts, referrer);
  if (!outcome.resolution) {
    throw FuzzyError(FuzzyError::Kind::kNotFound, "no capture for " + std::string(url));
  }
  return std::move(*outcome.resolution);
}

}  // namespace adreplay::fuzzy
