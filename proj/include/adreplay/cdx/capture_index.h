#ifndef ADREPLAY_CDX_CAPTURE_INDEX_H_
#define ADREPLAY_CDX_CAPTURE_INDEX_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/util/timestamp.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::cdx {

struct CdxEntry {
  std::string key;
  Timestamp14 timestamp;
  std::string original_uri;
  int status = 0;
  std::string mime;
  std::string source_id;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::string digest;
  bool revisit = false;
  bool unresolved_revisit = false;  // served with an empty payload

  // Server errors and unresolved revisits are chosen only when nothing else
  // exists for the key.
  bool preferred() const { return status < 500 && !unresolved_revisit; }

  bool operator==(const CdxEntry&) const = default;
};

// Total order used by the index: key, timestamp, then tie-breakers that make
// the order independent of source order.
bool EntryLess(const CdxEntry& a, const CdxEntry& b);

// Immutable sorted capture index.
class CaptureIndex {
 public:
  CaptureIndex() = default;
  // Sorts and drops duplicate (key, timestamp, digest) triples.
  explicit CaptureIndex(std::vector<CdxEntry> entries);

  std::span<const CdxEntry> entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::span<const CdxEntry> EntriesForKey(std::string_view key) const;
  std::span<const CdxEntry> EntriesWithPrefix(std::string_view key_prefix) const;

  // Position of the first entry whose key is not less than `key`.
  size_t LowerBound(std::string_view key) const;

 private:
  std::vector<CdxEntry> entries_;
};

struct SourceFailure {
  std::string source_id;
  std::string error;
};

struct BuildResult {
  CaptureIndex index;
  std::vector<SourceFailure> failures;
};

// One entry per HTTP response and per revisit. Revisits take the location of
// the response with the same payload digest (same URL preferred); unmatched
// revisits are kept and flagged. Records read before a source fails are kept
// and the failure is reported.
BuildResult BuildIndex(std::span<const warc::ArchiveSource> sources);

// The capture of `candidates` (all sharing one key, in index order) nearest
// to `ts`; ties go to the earlier capture. Non-preferred entries are used
// only when no preferred one exists. nullptr when empty.
const CdxEntry* NearestCapture(std::span<const CdxEntry> candidates, const Timestamp14& ts);

// Throws CdxError(kNotFound) when the key has no captures and
// CdxError(kNotAbsoluteUrl) for unusable URLs.
const CdxEntry& Lookup(const CaptureIndex& index, std::string_view url, const Timestamp14& ts);

std::vector<CdxEntry> PrefixSearch(const CaptureIndex& index, std::string_view prefix,
                                   std::optional<std::string_view> mime_filter = std::nullopt);

}  // namespace adreplay::cdx

#endif  // ADREPLAY_CDX_CAPTURE_INDEX_H_
