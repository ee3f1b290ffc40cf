#ifndef ADREPLAY_WARC_WARC_READER_H_
#define ADREPLAY_WARC_WARC_READER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "adreplay/warc/capture_record.h"

namespace adreplay::warc {

struct ReadOptions {
  // Blocks above this size are streamed to a spill file instead of memory.
  std::uint64_t max_in_memory_payload = std::uint64_t{64} << 20;
};

struct ParsedRecord {
  CaptureRecord record;
  ByteRange location;  // compressed member for gzip sources
};

// Single-pass, order-preserving reader. Next() throws WarcError on malformed
// input; records returned before the error stay valid and later calls return
// nullopt.
class WarcReader {
 public:
  explicit WarcReader(const ArchiveSource& source, ReadOptions options = {});
  ~WarcReader();
  WarcReader(const WarcReader&) = delete;
  WarcReader& operator=(const WarcReader&) = delete;

  std::optional<ParsedRecord> Next();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<ParsedRecord> ParseWarc(const ArchiveSource& source, ReadOptions options = {});

// Random access by a location previously reported by WarcReader.
CaptureRecord ReadRecordAt(const ArchiveSource& source, ByteRange location,
                           ReadOptions options = {});

// Decodes exactly one uncompressed record.
CaptureRecord ParseRecordBytes(std::string_view bytes);

}  // namespace adreplay::warc

#endif  // ADREPLAY_WARC_WARC_READER_H_
