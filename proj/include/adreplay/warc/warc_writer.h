#ifndef ADREPLAY_WARC_WARC_WRITER_H_
#define ADREPLAY_WARC_WARC_WRITER_H_

#include <filesystem>
#include <span>
#include <string>

#include "adreplay/warc/capture_record.h"

namespace adreplay::warc {

// Serializes one record as WARC/1.1 with CRLF line endings, including the
// trailing CRLF CRLF separator. Throws std::invalid_argument when a field
// required by the record type is missing.
std::string SerializeRecord(const CaptureRecord& record);

// Writes `records` to `path`; with `gzip` each record becomes its own gzip
// member. The returned source lists every record's location. Throws
// WarcError(kIoFailure).
ArchiveSource WriteWarc(std::span<const CaptureRecord> records,
                        const std::filesystem::path& path, bool gzip);

}  // namespace adreplay::warc

#endif  // ADREPLAY_WARC_WARC_WRITER_H_
