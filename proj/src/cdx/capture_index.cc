#include "adreplay/cdx/capture_index.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "adreplay/cdx/canonical_url.h"
#include "adreplay/util/digest.h"
#include "adreplay/util/strings.h"
#include "adreplay/warc/warc_reader.h"

namespace adreplay::cdx {

bool EntryLess(const CdxEntry& a, const CdxEntry& b) {
  return std::tie(a.key, a.timestamp, a.digest, a.source_id, a.offset, a.original_uri) <
         std::tie(b.key, b.timestamp, b.digest, b.source_id, b.offset, b.original_uri);
}

CaptureIndex::CaptureIndex(std::vector<CdxEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), EntryLess);
  const auto same_triple = [](const CdxEntry& a, const CdxEntry& b) {
    return a.key == b.key && a.timestamp == b.timestamp && a.digest == b.digest;
  };
  entries_.erase(std::unique(entries_.begin(), entries_.end(), same_triple), entries_.end());
}

size_t CaptureIndex::LowerBound(std::string_view key) const {
  return std::partition_point(entries_.begin(), entries_.end(),
                              [&](const CdxEntry& e) { return e.key < key; }) -
         entries_.begin();
}

std::span<const CdxEntry> CaptureIndex::EntriesForKey(std::string_view key) const {
  const size_t begin = LowerBound(key);
  size_t end = begin;
  while (end < entries_.size() && entries_[end].key == key) ++end;
  return std::span<const CdxEntry>(entries_).subspan(begin, end - begin);
}

std::span<const CdxEntry> CaptureIndex::EntriesWithPrefix(std::string_view key_prefix) const {
  const size_t begin = LowerBound(key_prefix);
  const auto end = std::partition_point(
      entries_.begin() + static_cast<std::ptrdiff_t>(begin), entries_.end(),
      [&](const CdxEntry& e) { return std::string_view(e.key).starts_with(key_prefix); });
  return std::span<const CdxEntry>(entries_).subspan(begin, (end - entries_.begin()) - begin);
}

namespace {

struct Original {
  std::string uri;
  Timestamp14 timestamp;
  std::string source_id;
  warc::ByteRange location;
  int status;
  std::string mime;
};

bool OriginalLess(const Original& a, const Original& b) {
  return std::tie(a.timestamp, a.source_id, a.location.offset) <
         std::tie(b.timestamp, b.source_id, b.location.offset);
}

}  // namespace

BuildResult BuildIndex(std::span<const warc::ArchiveSource> sources) {
  BuildResult result;
  std::vector<CdxEntry> entries;
  std::vector<CdxEntry> revisits;
  std::map<std::string, std::vector<Original>> by_digest;

  for (const warc::ArchiveSource& source : sources) {
    try {
      warc::WarcReader reader(source);
      while (auto parsed = reader.Next()) {
        const warc::CaptureRecord& record = parsed->record;
        const bool response = record.record_type == warc::RecordType::kResponse &&
                              record.http_status != 0;
        const bool revisit = record.record_type == warc::RecordType::kRevisit;
        if (!response && !revisit) continue;
        std::string key;
        try {
          key = Canonicalize(record.target_uri).key();
        } catch (const CdxError&) {
          continue;  // dns:, urn: and other non-HTTP targets
        }
        CdxEntry entry;
        entry.key = std::move(key);
        entry.timestamp = Timestamp14::FromTime(record.warc_date);
        entry.original_uri = record.target_uri;
        entry.status = record.http_status;
        entry.mime = record.content_type;
        entry.source_id = source.id;
        entry.offset = parsed->location.offset;
        entry.length = parsed->location.length;
        if (revisit) {
          entry.digest = record.payload_digest;
          entry.revisit = true;
          revisits.push_back(std::move(entry));
          continue;
        }
        entry.digest = record.payload_digest.empty() ? Sha1Base32Digest(record.payload.view())
                                                     : record.payload_digest;
        by_digest[entry.digest].push_back(Original{entry.original_uri, entry.timestamp,
                                                   entry.source_id, parsed->location,
                                                   entry.status, entry.mime});
        entries.push_back(std::move(entry));
      }
    } catch (const warc::WarcError& e) {
      result.failures.push_back({source.id, e.what()});
    }
  }

  for (CdxEntry& entry : revisits) {
    const auto it = entry.digest.empty() ? by_digest.end() : by_digest.find(entry.digest);
    if (it == by_digest.end()) {
      entry.unresolved_revisit = true;
      entries.push_back(std::move(entry));
      continue;
    }
    const Original* best = nullptr;
    for (const Original& o : it->second) {
      const bool same_uri = o.uri == entry.original_uri;
      const bool best_same = best != nullptr && best->uri == entry.original_uri;
      if (best == nullptr || (same_uri && !best_same) ||
          (same_uri == best_same && OriginalLess(o, *best))) {
        best = &o;
      }
    }
    entry.source_id = best->source_id;
    entry.offset = best->location.offset;
    entry.length = best->location.length;
    if (entry.status == 0) entry.status = best->status;
    if (entry.mime.empty()) entry.mime = best->mime;
    entries.push_back(std::move(entry));
  }

  result.index = CaptureIndex(std::move(entries));
  return result;
}

const CdxEntry* NearestCapture(std::span<const CdxEntry> candidates, const Timestamp14& ts) {
  if (candidates.empty()) return nullptr;
  const bool any_preferred =
      std::any_of(candidates.begin(), candidates.end(), [](const CdxEntry& e) { return e.preferred(); });
  const auto usable = [&](const CdxEntry& e) { return !any_preferred || e.preferred(); };

  // Candidates share a key, so they are already ordered by timestamp.
  const auto split = std::partition_point(candidates.begin(), candidates.end(),
                                          [&](const CdxEntry& e) { return e.timestamp < ts; });
  auto right = split;
  while (right != candidates.end() && !usable(*right)) ++right;
  auto left = split;
  const CdxEntry* before = nullptr;
  while (left != candidates.begin()) {
    --left;
    if (usable(*left)) {
      before = &*left;
      break;
    }
  }
  // Among equal timestamps prefer the first in index order.
  if (before != nullptr) {
    for (auto it = left; it != candidates.begin();) {
      --it;
      if (it->timestamp != before->timestamp) break;
      if (usable(*it)) before = &*it;
    }
  }
  const CdxEntry* after = right == candidates.end() ? nullptr : &*right;
  if (before == nullptr) return after;
  if (after == nullptr) return before;
  return SecondsBetween(ts, before->timestamp) <= SecondsBetween(after->timestamp, ts) ? before
                                                                                       : after;
}

const CdxEntry& Lookup(const CaptureIndex& index, std::string_view url, const Timestamp14& ts) {
  const CanonicalUrl key = Canonicalize(url);
  const CdxEntry* hit = NearestCapture(index.EntriesForKey(key.key()), ts);
  if (hit == nullptr) {
    throw CdxError(CdxError::Kind::kNotFound, "no capture for " + key.key());
  }
  return *hit;
}

std::vector<CdxEntry> PrefixSearch(const CaptureIndex& index, std::string_view prefix,
                                   std::optional<std::string_view> mime_filter) {
  std::string key_prefix;
  if (!TrimWhitespace(prefix).empty()) {
    try {
      key_prefix = CanonicalizePrefix(prefix);
    } catch (const CdxError&) {
      return {};
    }
  }
  const std::string mime = mime_filter ? AsciiLower(TrimWhitespace(*mime_filter)) : "";
  std::vector<CdxEntry> out;
  for (const CdxEntry& e : index.EntriesWithPrefix(key_prefix)) {
    if (mime_filter && !mime.empty() && e.mime != mime) continue;
    out.push_back(e);
  }
  return out;
}

}  // namespace adreplay::cdx
