#ifndef ADREPLAY_FUZZY_FUZZY_RULE_H_
#define ADREPLAY_FUZZY_FUZZY_RULE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/cdx/canonical_url.h"

namespace adreplay::fuzzy {

class FuzzyError : public std::runtime_error {
 public:
  enum class Kind { kRuleNotApplicable, kNoAdIdInReferrer, kNotFound, kBadRuleConfig };

  FuzzyError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class TransformKind {
  kRandomSubdomain,  // leftmost label of exactly 32 lowercase hex -> "*"
  kStripParam,       // drop every query parameter named `argument`
  kReferrerAdId,     // search same host for paths holding the referrer's ad id
  kStripQuery,       // drop the whole query
};

std::string_view TransformKindName(TransformKind kind);
std::optional<TransformKind> ParseTransformKind(std::string_view name);

struct FuzzyRule {
  std::string name;
  int priority = 0;  // lower runs first; unique within a rule set
  std::string host_pattern = "*";
  std::string path_pattern = "*";
  TransformKind transform = TransformKind::kStripQuery;
  // Parameter name for kStripParam, path token for kReferrerAdId.
  std::string argument;

  bool operator==(const FuzzyRule&) const = default;
};

// safeframe, amazon_rnd, richload, generic.
std::vector<FuzzyRule> BuiltinRules();

// Line-oriented rule file. Each non-comment line is
//
//   <name> priority=<int> transform=<kind> [host=<glob>] [path=<glob>]
//          [param=<name>] [token=<text>]
//
// where <kind> is random_subdomain, strip_param, referrer_ad_id or
// strip_query. Globs use '*' and '?' and ignore case; host globs see the
// canonical host without its port, path globs the path without the query.
// '#' starts a comment. Unknown kinds or keys, duplicate names or priorities
// and a strip_param rule without param= are rejected with kBadRuleConfig.
std::vector<FuzzyRule> ParseRuleConfig(std::istream& in);
std::vector<FuzzyRule> LoadRuleFile(const std::filesystem::path& path);

// Writes rules back in the config grammar.
std::string FormatRuleConfig(const std::vector<FuzzyRule>& rules);

bool RuleApplies(const FuzzyRule& rule, const cdx::CanonicalUrl& url);

// Alternate lookup key for key-rewriting transforms; nullopt when the rule
// does not apply or the transform is kReferrerAdId.
std::optional<std::string> DeriveAlternateKey(const FuzzyRule& rule, const cdx::CanonicalUrl& url);

// Where a Richload-style request may be found: same host, a path holding
// the ad id as a whole segment and the token anywhere (case-insensitive).
struct SearchSpec {
  std::string host;
  std::string ad_id;
  std::string path_token;

  bool Matches(std::string_view key) const;
  bool operator==(const SearchSpec&) const = default;
};

std::optional<SearchSpec> DeriveSearchSpec(const FuzzyRule& rule, const cdx::CanonicalUrl& url,
                                           std::optional<std::string_view> referrer);

// First all-digit path segment of `url`.
std::optional<std::string> ExtractAdId(std::string_view url);

// Built-in rules as standalone operations. All throw
// FuzzyError(kRuleNotApplicable) when the input does not fit the rule.
std::string NormalizeSafeframe(std::string_view url);
std::string NormalizeAmazonRnd(std::string_view url);
// Also throws FuzzyError(kNoAdIdInReferrer).
SearchSpec ResolveRichload(std::string_view url, std::optional<std::string_view> referrer);
std::string GenericQueryFuzzy(std::string_view url);

}  // namespace adreplay::fuzzy

#endif  // ADREPLAY_FUZZY_FUZZY_RULE_H_
