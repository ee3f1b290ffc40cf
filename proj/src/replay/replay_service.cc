#include "adreplay/replay/replay_service.h"

#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "adreplay/cdx/canonical_url.h"
#include "adreplay/replay/http_body.h"
#include "adreplay/replay/miss_report.h"
#include "adreplay/rewrite/css_rewriter.h"
#include "adreplay/rewrite/html_rewriter.h"
#include "adreplay/rewrite/urim.h"
#include "adreplay/rewrite/wombat.h"
#include "adreplay/util/strings.h"
#include "adreplay/util/timestamp.h"
#include "adreplay/util/url.h"
#include "adreplay/warc/warc_reader.h"
#include "json.hpp"

namespace adreplay::replay {

namespace {

using nlohmann::ordered_json;
using warc::FindHeader;

constexpr std::array<std::string_view, 13> kDroppedHeaders = {
    "connection",       "keep-alive",
    "proxy-authenticate", "proxy-authorization",
    "proxy-connection", "te",
    "trailer",          "transfer-encoding",
    "upgrade",          "content-length",
    "content-security-policy", "content-security-policy-report-only",
    "x-content-security-policy",
};

bool IsDropped(std::string_view name) {
  for (std::string_view d : kDroppedHeaders) {
    if (EqualsIgnoreCase(name, d)) return true;
  }
  return false;
}

HttpResponse JsonResponse(int status, const ordered_json& body) {
  HttpResponse r;
  r.status = status;
  r.headers.emplace_back("Content-Type", "application/json");
  r.body = body.dump(2) + "\n";
  return r;
}

HttpResponse ErrorResponse(int status, std::string_view error, std::string_view detail) {
  return JsonResponse(status, {{"error", error}, {"detail", detail}});
}

std::string_view RewriteErrorName(rewrite::RewriteError::Kind kind) {
  switch (kind) {
    case rewrite::RewriteError::Kind::kInvalidTimestamp: return "InvalidTimestamp";
    case rewrite::RewriteError::Kind::kRelativeUrir: return "RelativeUrir";
    case rewrite::RewriteError::Kind::kNotAUriM: return "NotAUriM";
    case rewrite::RewriteError::Kind::kUnknownModifier: return "UnknownModifier";
  }
  return "NotAUriM";
}

// Proxies and browsers sometimes collapse "https://" to "https:/".
std::string RepairCollapsedScheme(std::string_view target, std::string_view replay_base) {
  std::string out(target);
  size_t i = replay_base.size();
  while (i < out.size() && out[i] != '/') ++i;
  if (i >= out.size()) return out;
  const std::string_view rest = std::string_view(out).substr(i + 1);
  for (std::string_view scheme : {"http:/", "https:/"}) {
    if (StartsWithIgnoreCase(rest, scheme) && rest.size() > scheme.size() &&
        rest[scheme.size()] != '/') {
      out.insert(i + 1 + scheme.size(), "/");
      break;
    }
  }
  return out;
}

std::map<std::string, std::string> ParseQuery(std::string_view query) {
  std::map<std::string, std::string> out;
  for (std::string_view part : Split(query, '&')) {
    if (part.empty()) continue;
    const size_t eq = part.find('=');
    const std::string name = FormDecode(part.substr(0, eq));
    const std::string value = eq == std::string_view::npos ? "" : FormDecode(part.substr(eq + 1));
    out.emplace(name, value);
  }
  return out;
}

std::optional<std::string> CharsetParam(std::string_view content_type) {
  for (std::string_view param : Split(content_type, ';')) {
    param = TrimWhitespace(param);
    if (StartsWithIgnoreCase(param, "charset=")) {
      std::string_view v = TrimWhitespace(param.substr(8));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      return AsciiLower(v);
    }
  }
  return std::nullopt;
}

void SetHeader(warc::HeaderList& headers, std::string_view name, std::string value) {
  for (auto& [n, v] : headers) {
    if (EqualsIgnoreCase(n, name)) {
      v = std::move(value);
      return;
    }
  }
  headers.emplace_back(std::string(name), std::move(value));
}

void RemoveHeader(warc::HeaderList& headers, std::string_view name) {
  std::erase_if(headers, [&](const auto& h) { return EqualsIgnoreCase(h.first, name); });
}

}  // namespace

void ServerConfig::Validate() const {
  if (replay_base.empty() || replay_base.back() != '/') {
    throw std::invalid_argument("replay base must be non-empty and end with '/': '" +
                                replay_base + "'");
  }
}

std::optional<std::string> RefererToUrir(std::string_view referer, std::string_view replay_base) {
  referer = TrimWhitespace(referer);
  if (referer.empty()) return std::nullopt;
  std::string candidate(referer);
  if (!referer.starts_with(replay_base)) {
    // An absolute referer to this service: keep path and query only.
    const UriReference ref = SplitUriReference(referer);
    if (ref.authority) {
      candidate = ref.path;
      if (ref.query) candidate += "?" + *ref.query;
    }
  }
  if (candidate.starts_with(replay_base)) {
    try {
      return rewrite::ParseUriM(RepairCollapsedScheme(candidate, replay_base), replay_base).urir;
    } catch (const rewrite::RewriteError&) {
    }
  }
  if (IsHttpUrl(referer)) return std::string(referer);
  return std::nullopt;
}

ReplayService::ReplayService(ServerConfig config, std::shared_ptr<const Collection> collection)
    : config_(std::move(config)), collection_(std::move(collection)) {
  config_.Validate();
  if (!collection_) collection_ = BuildCollection({});
  if (config_.shim_asset) {
    std::ifstream in(*config_.shim_asset, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read shim asset " + config_.shim_asset->string());
    std::ostringstream body;
    body << in.rdbuf();
    shim_body_ = body.str();
  }
}

void ReplayService::Reload(std::shared_ptr<const Collection> collection) {
  std::lock_guard lock(mutex_);
  collection_ = std::move(collection);
}

std::shared_ptr<const Collection> ReplayService::snapshot() const {
  std::lock_guard lock(mutex_);
  return collection_;
}

HttpResponse ReplayService::Handle(const HttpRequest& request) const {
  const std::shared_ptr<const Collection> collection = snapshot();
  if (config_.verbosity > 0) std::cerr << request.method << " " << request.target << "\n";
  if (request.method != "GET" && request.method != "HEAD") {
    HttpResponse r = ErrorResponse(405, "MethodNotAllowed", request.method);
    r.headers.emplace_back("Allow", "GET, HEAD");
    return r;
  }
  const size_t q = request.target.find('?');
  const std::string_view path = std::string_view(request.target).substr(0, q);
  const std::string_view query =
      q == std::string::npos ? std::string_view() : std::string_view(request.target).substr(q + 1);
  if (path == "/health") return ServeHealth(*collection);
  if (path == "/api/search") return ServeSearch(*collection, query);
  if (path == config_.shim_src) return ServeShim();
  if (request.target.starts_with(config_.replay_base)) return ServeMemento(*collection, request);
  return ErrorResponse(404, "NotFound", request.target);
}

HttpResponse ReplayService::ServeHealth(const Collection& collection) const {
  return JsonResponse(200, {{"status", "ok"},
                            {"entries", collection.index->size()},
                            {"sources", collection.sources.size()},
                            {"failed_sources", collection.failures.size()}});
}

HttpResponse ReplayService::ServeShim() const {
  if (!shim_body_) return ErrorResponse(404, "NotFound", "no shim asset configured");
  HttpResponse r;
  r.headers.emplace_back("Content-Type", "application/javascript");
  r.body = *shim_body_;
  return r;
}

HttpResponse ReplayService::ServeSearch(const Collection& collection,
                                        std::string_view query) const {
  const auto params = ParseQuery(query);
  const auto prefix = params.find("prefix");
  if (prefix == params.end() || prefix->second.empty()) {
    return ErrorResponse(400, "MissingPrefix", "the prefix parameter is required");
  }
  std::optional<std::string_view> mime;
  if (const auto m = params.find("mime"); m != params.end() && !m->second.empty()) {
    mime = m->second;
  }
  ordered_json rows = ordered_json::array();
  for (const cdx::CdxEntry& e : cdx::PrefixSearch(*collection.index, prefix->second, mime)) {
    rows.push_back({{"urir", e.original_uri},
                    {"timestamp14", e.timestamp.text()},
                    {"mime", e.mime},
                    {"status", e.status}});
  }
  return JsonResponse(200, {{"prefix", prefix->second}, {"rows", rows}});
}

HttpResponse ReplayService::ServeMemento(const Collection& collection,
                                         const HttpRequest& request) const {
  const std::string& base = config_.replay_base;
  rewrite::UriM urim;
  try {
    urim = rewrite::ParseUriM(RepairCollapsedScheme(request.target, base), base);
  } catch (const rewrite::RewriteError& e) {
    return ErrorResponse(400, RewriteErrorName(e.kind()), e.what());
  }
  if (!IsHttpUrl(urim.urir)) return ErrorResponse(400, "NotAUriM", "URI-R is not http(s)");
  const Timestamp14 ts = *Timestamp14::Parse(urim.timestamp14);

  std::optional<std::string> referrer;
  if (const auto referer = FindHeader(request.headers, "Referer")) {
    referrer = RefererToUrir(*referer, base);
  }

  fuzzy::ResolveOutcome outcome;
  try {
    outcome = collection.resolver->TryResolve(urim.urir, ts, referrer);
  } catch (const cdx::CdxError& e) {
    return ErrorResponse(400, "NotAUriM", e.what());
  }
  if (!outcome.resolution) {
    MissReport report;
    report.requested_urir = urim.urir;
    report.ts = urim.timestamp14;
    report.rules_tried = std::move(outcome.attempts);
    report.nearest_keys = NearestKeys(*collection.index, cdx::Canonicalize(urim.urir).key());
    HttpResponse r;
    r.status = 404;
    r.headers.emplace_back("Content-Type", "application/json");
    r.body = report.ToJson();
    return r;
  }

  const fuzzy::Resolution& resolution = *outcome.resolution;
  const cdx::CdxEntry& entry = resolution.entry;
  const auto source = collection.sources.find(entry.source_id);
  if (source == collection.sources.end()) {
    return ErrorResponse(500, "MissingSource", entry.source_id);
  }
  warc::CaptureRecord record;
  try {
    record = warc::ReadRecordAt(source->second, {entry.offset, entry.length});
  } catch (const std::exception& e) {
    return ErrorResponse(500, "UnreadableRecord", e.what());
  }

  HttpResponse r;
  r.status = record.http_status != 0 ? record.http_status : entry.status;
  std::string body;
  if (!entry.unresolved_revisit) {
    body = std::string(record.payload.view());
    const auto te = FindHeader(record.http_headers, "Transfer-Encoding");
    if (te && ContainsIgnoreCase(*te, "chunked")) {
      if (auto plain = Dechunk(body)) body = std::move(*plain);
    }
  }
  for (const auto& [name, value] : record.http_headers) {
    if (!IsDropped(name)) r.headers.emplace_back(name, value);
  }

  const std::string mime = warc::MediaType(FindHeader(r.headers, "Content-Type").value_or(""));
  const bool raw = urim.modifier == rewrite::Modifier::kId;
  const bool is_html = mime == "text/html" || mime == "application/xhtml+xml";
  const bool is_css = mime == "text/css";
  if (!raw && (is_html || is_css) && !body.empty()) {
    std::optional<std::string> decoded = std::string(body);
    if (const auto ce = FindHeader(r.headers, "Content-Encoding")) {
      decoded = DecodeContentEncoding(body, *ce);
    }
    if (decoded) {
      RemoveHeader(r.headers, "Content-Encoding");
      rewrite::RewriteContext ctx =
          rewrite::MakeRewriteContext(record.target_uri.empty() ? entry.original_uri
                                                                : record.target_uri,
                                      entry.timestamp.text(), base, config_.inject_shim);
      ctx.shim_src = config_.shim_src;
      ctx.charset = CharsetParam(FindHeader(r.headers, "Content-Type").value_or(""));
      body = is_html ? rewrite::RewriteHtml(*decoded, ctx) : rewrite::RewriteCss(*decoded, ctx);
    }
  }

  if (const auto location = FindHeader(r.headers, "Location")) {
    try {
      const std::string target = ResolveReference(entry.original_uri, *location);
      if (IsHttpUrl(target)) {
        SetHeader(r.headers, "Location",
                  rewrite::MakeUriM(base, target, entry.timestamp.text(), urim.modifier));
      }
    } catch (const std::exception&) {
    }
  }

  if (raw) {
    SetHeader(r.headers, "Accept-Ranges", "bytes");
    const auto range = FindHeader(request.headers, "Range");
    RangeSpec spec;
    if (range && r.status == 200) {
      switch (ParseRange(*range, body.size(), &spec)) {
        case RangeResult::kSatisfiable:
          r.status = 206;
          SetHeader(r.headers, "Content-Range",
                    "bytes " + std::to_string(spec.first) + "-" + std::to_string(spec.last) + "/" +
                        std::to_string(body.size()));
          body = body.substr(spec.first, spec.last - spec.first + 1);
          break;
        case RangeResult::kUnsatisfiable:
          r.status = 416;
          SetHeader(r.headers, "Content-Range", "bytes */" + std::to_string(body.size()));
          body.clear();
          break;
        case RangeResult::kNone:
          break;
      }
    }
  }

  SetHeader(r.headers, "Memento-Datetime", FormatHttpDate(entry.timestamp.time()));
  SetHeader(r.headers, "X-Archive-Rule", resolution.rule_used);
  r.body = std::move(body);
  return r;
}

}  // namespace adreplay::replay
