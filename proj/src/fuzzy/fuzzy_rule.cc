#include "adreplay/fuzzy/fuzzy_rule.h"

#include <fstream>
#include <set>
#include <sstream>

#include "adreplay/util/strings.h"
#include "adreplay/util/url.h"

namespace adreplay::fuzzy {

namespace {

constexpr size_t kRandomLabelLength = 32;

std::string_view HostWithoutPort(std::string_view host) {
  if (host.starts_with("[")) {
    const size_t close = host.find(']');
    return close == std::string_view::npos ? host : host.substr(0, close + 1);
  }
  return host.substr(0, host.find(':'));
}

[[noreturn]] void NotApplicable(std::string_view rule, std::string_view url) {
  throw FuzzyError(FuzzyError::Kind::kRuleNotApplicable,
                   std::string(rule) + " does not apply to " + std::string(url));
}

const FuzzyRule& BuiltinRule(std::string_view name) {
  static const std::vector<FuzzyRule> rules = BuiltinRules();
  for (const FuzzyRule& rule : rules) {
    if (rule.name == name) return rule;
  }
  throw std::logic_error("missing builtin rule");
}

cdx::CanonicalUrl CanonicalOrNotApplicable(std::string_view rule, std::string_view url) {
  try {
    return cdx::Canonicalize(url);
  } catch (const cdx::CdxError&) {
    NotApplicable(rule, url);
  }
}

}  // namespace

std::string_view TransformKindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kRandomSubdomain: return "random_subdomain";
    case TransformKind::kStripParam: return "strip_param";
    case TransformKind::kReferrerAdId: return "referrer_ad_id";
    case TransformKind::kStripQuery: return "strip_query";
  }
  return "unknown";
}

std::optional<TransformKind> ParseTransformKind(std::string_view name) {
  for (auto kind : {TransformKind::kRandomSubdomain, TransformKind::kStripParam,
                    TransformKind::kReferrerAdId, TransformKind::kStripQuery}) {
    if (TransformKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<FuzzyRule> BuiltinRules() {
  return {
      {"safeframe", 10, "*.safeframe.googlesyndication.com", "*",
       TransformKind::kRandomSubdomain, ""},
      {"amazon_rnd", 20, "*amazon-adsystem.com", "*", TransformKind::kStripParam, "rnd"},
      {"richload", 30, "*", "*richload*", TransformKind::kReferrerAdId, "richload"},
      {"generic", 90, "*", "*", TransformKind::kStripQuery, ""},
  };
}

std::vector<FuzzyRule> ParseRuleConfig(std::istream& in) {
  std::vector<FuzzyRule> rules;
  std::set<std::string> names;
  std::set<int> priorities;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto bad = [&](const std::string& why) {
      return FuzzyError(FuzzyError::Kind::kBadRuleConfig,
                        "rule config line " + std::to_string(line_no) + ": " + why);
    };
    const size_t hash = line.find('#');
    std::istringstream fields(line.substr(0, hash));
    std::string name;
    if (!(fields >> name)) continue;
    FuzzyRule rule;
    rule.name = name;
    bool have_priority = false, have_transform = false;
    std::string field;
    while (fields >> field) {
      const size_t eq = field.find('=');
      if (eq == std::string::npos || eq == 0) throw bad("expected key=value, got '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "priority") {
        try {
          size_t used = 0;
          rule.priority = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          throw bad("invalid priority '" + value + "'");
        }
        have_priority = true;
      } else if (key == "transform") {
        const auto kind = ParseTransformKind(value);
        if (!kind) throw bad("unknown transform kind '" + value + "'");
        rule.transform = *kind;
        have_transform = true;
      } else if (key == "host") {
        rule.host_pattern = value;
      } else if (key == "path") {
        rule.path_pattern = value;
      } else if (key == "param" || key == "token") {
        rule.argument = value;
      } else {
        throw bad("unknown key '" + key + "'");
      }
    }
    if (!have_priority) throw bad("missing priority=");
    if (!have_transform) throw bad("missing transform=");
    if (rule.transform == TransformKind::kStripParam && rule.argument.empty()) {
      throw bad("strip_param needs param=");
    }
    if (rule.transform == TransformKind::kReferrerAdId && rule.argument.empty()) {
      rule.argument = "richload";
    }
    if (!names.insert(rule.name).second) throw bad("duplicate rule name '" + rule.name + "'");
    if (!priorities.insert(rule.priority).second) {
      throw bad("duplicate priority " + std::to_string(rule.priority));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<FuzzyRule> LoadRuleFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FuzzyError(FuzzyError::Kind::kBadRuleConfig, "cannot open " + path.string());
  }
  return ParseRuleConfig(in);
}

std::string FormatRuleConfig(const std::vector<FuzzyRule>& rules) {
  std::string out;
  for (const FuzzyRule& r : rules) {
    out += r.name + " priority=" + std::to_string(r.priority) +
           " transform=" + std::string(TransformKindName(r.transform)) +
           " host=" + r.host_pattern + " path=" + r.path_pattern;
    if (r.transform == TransformKind::kStripParam) out += " param=" + r.argument;
    if (r.transform == TransformKind::kReferrerAdId) out += " token=" + r.argument;
    out += "\n";
  }
  return out;
}

bool RuleApplies(const FuzzyRule& rule, const cdx::CanonicalUrl& url) {
  return GlobMatch(rule.host_pattern, HostWithoutPort(url.host())) &&
         GlobMatch(rule.path_pattern, url.path());
}

std::optional<std::string> DeriveAlternateKey(const FuzzyRule& rule, const cdx::CanonicalUrl& url) {
  if (!RuleApplies(rule, url)) return std::nullopt;
  const std::string& key = url.key();
  switch (rule.transform) {
    case TransformKind::kRandomSubdomain: {
      const std::string_view host = url.host();
      const size_t dot = host.find('.');
      if (dot != kRandomLabelLength || !IsLowerHex(host.substr(0, dot))) return std::nullopt;
      return "*" + key.substr(dot);
    }
    case TransformKind::kStripParam: {
      const auto query = url.query();
      if (!query) return std::nullopt;
      std::string kept;
      bool removed = false;
      for (std::string_view param : Split(*query, '&')) {
        if (param.substr(0, param.find('=')) == rule.argument) {
          removed = true;
          continue;
        }
        if (!kept.empty()) kept += "&";
        kept += param;
      }
      if (!removed) return std::nullopt;
      std::string out(url.host());
      out += url.path();
      if (!kept.empty()) out += "?" + kept;
      return out;
    }
    case TransformKind::kStripQuery: {
      if (!url.query()) return std::nullopt;
      return std::string(url.host()) + std::string(url.path());
    }
    case TransformKind::kReferrerAdId:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> ExtractAdId(std::string_view url) {
  const UriReference ref = SplitUriReference(url);
  for (std::string_view segment : Split(ref.path, '/')) {
    if (IsAllDigits(segment)) return std::string(segment);
  }
  return std::nullopt;
}

bool SearchSpec::Matches(std::string_view key) const {
  const cdx::KeyParts parts = cdx::SplitKey(key);
  if (parts.host != host || !ContainsIgnoreCase(parts.path, path_token)) return false;
  for (std::string_view segment : Split(parts.path, '/')) {
    if (segment == ad_id) return true;
  }
  return false;
}

std::optional<SearchSpec> DeriveSearchSpec(const FuzzyRule& rule, const cdx::CanonicalUrl& url,
                                           std::optional<std::string_view> referrer) {
  if (rule.transform != TransformKind::kReferrerAdId || !RuleApplies(rule, url) ||
      !ContainsIgnoreCase(url.path(), rule.argument)) {
    return std::nullopt;
  }
  const auto ad_id = referrer ? ExtractAdId(*referrer) : std::nullopt;
  if (!ad_id) {
    throw FuzzyError(FuzzyError::Kind::kNoAdIdInReferrer,
                     "no numeric ad id in referrer '" + std::string(referrer.value_or("")) + "'");
  }
  return SearchSpec{std::string(url.host()), *ad_id, rule.argument};
}

std::string NormalizeSafeframe(std::string_view url) {
  const auto key = DeriveAlternateKey(BuiltinRule("safeframe"),
                                      CanonicalOrNotApplicable("safeframe", url));
  if (!key) NotApplicable("safeframe", url);
  return *key;
}

std::string NormalizeAmazonRnd(std::string_view url) {
  const auto key = DeriveAlternateKey(BuiltinRule("amazon_rnd"),
                                      CanonicalOrNotApplicable("amazon_rnd", url));
  if (!key) NotApplicable("amazon_rnd", url);
  return *key;
}

SearchSpec ResolveRichload(std::string_view url, std::optional<std::string_view> referrer) {
  const auto spec = DeriveSearchSpec(BuiltinRule("richload"),
                                     CanonicalOrNotApplicable("richload", url), referrer);
  if (!spec) NotApplicable("richload", url);
  return *spec;
}

std::string GenericQueryFuzzy(std::string_view url) {
  const auto key = DeriveAlternateKey(BuiltinRule("generic"),
                                      CanonicalOrNotApplicable("generic", url));
  if (!key) NotApplicable("generic", url);
  return *key;
}

}  // namespace adreplay::fuzzy
