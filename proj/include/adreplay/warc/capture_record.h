#ifndef ADREPLAY_WARC_CAPTURE_RECORD_H_
#define ADREPLAY_WARC_CAPTURE_RECORD_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adreplay::warc {

enum class RecordType { kWarcinfo, kRequest, kResponse, kResource, kMetadata, kRevisit };

std::string_view RecordTypeName(RecordType type);
std::optional<RecordType> ParseRecordType(std::string_view name);

using HeaderList = std::vector<std::pair<std::string, std::string>>;

// First value for `name` (case-insensitive), if any.
std::optional<std::string_view> FindHeader(const HeaderList& headers, std::string_view name);

// Immutable byte sequence. Small payloads live in memory; large ones are
// backed by a mapped, already-unlinked spill file. Copies share storage.
class Payload {
 public:
  Payload();
  explicit Payload(std::string bytes);

  // Takes ownership of a spill file descriptor holding exactly `size` bytes.
  static Payload FromSpillFile(int fd, std::uint64_t size);

  std::string_view view() const;
  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool spilled() const;

  // Bytes from `from` to the end, sharing storage.
  Payload Suffix(std::uint64_t from) const;

  friend bool operator==(const Payload& a, const Payload& b) { return a.view() == b.view(); }

 private:
  struct Storage;
  std::shared_ptr<const Storage> storage_;
  std::uint64_t offset_ = 0;
  std::uint64_t size_ = 0;
};

// One archived record. For request/response/revisit records carrying an
// HTTP message the http_* fields hold the decoded message head, and
// content_type mirrors the media type of the HTTP Content-Type header. For
// other records content_type is the WARC Content-Type.
struct CaptureRecord {
  RecordType record_type = RecordType::kResponse;
  std::string target_uri;
  std::chrono::sys_seconds warc_date{};
  std::string record_id;
  std::string payload_digest;
  HeaderList extra_warc_headers;

  std::string http_version = "HTTP/1.1";
  int http_status = 0;  // response/revisit only
  std::string http_reason;
  std::string http_method;  // request only
  HeaderList http_headers;

  Payload payload;
  std::string content_type;

  bool has_http_message() const { return http_status != 0 || !http_method.empty(); }

  bool operator==(const CaptureRecord&) const = default;
};

// Lowercased media type without parameters: "text/html; charset=x" -> "text/html".
std::string MediaType(std::string_view content_type_header);

std::string MakeRecordId();

enum class SourceKind { kWarcPlain, kWarcGzip, kWacz };

struct ByteRange {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  bool operator==(const ByteRange&) const = default;
};

// Where a WARC stream lives. A WARC stored inside a container occupies
// [base_offset, base_offset + base_length) of `locator`; member offsets are
// relative to that window.
struct ArchiveSource {
  SourceKind kind = SourceKind::kWarcPlain;
  std::filesystem::path locator;
  std::string id;  // stable identity used by index entries
  std::uint64_t base_offset = 0;
  std::optional<std::uint64_t> base_length;
  std::vector<ByteRange> member_offsets;
};

// Sniffs the gzip magic to choose the kind. Throws WarcError(kIoFailure).
ArchiveSource OpenWarcFile(const std::filesystem::path& path);

class WarcError : public std::runtime_error {
 public:
  enum class Kind {
    kTruncatedRecord,
    kBadVersionLine,
    kBadGzipMember,
    kBadHeader,
    kIoFailure,
    kNotAZip,
    kNoArchiveMembers,
  };

  WarcError(Kind kind, const std::string& message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view WarcErrorKindName(WarcError::Kind kind);

}  // namespace adreplay::warc

#endif  // ADREPLAY_WARC_CAPTURE_RECORD_H_
