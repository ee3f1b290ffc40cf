#include "adreplay/warc/capture_record.h"

#include <sys/mman.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include "adreplay/util/strings.h"

namespace adreplay::warc {

namespace {

constexpr std::array<std::pair<RecordType, std::string_view>, 6> kRecordTypeNames = {{
    {RecordType::kWarcinfo, "warcinfo"},
    {RecordType::kRequest, "request"},
    {RecordType::kResponse, "response"},
    {RecordType::kResource, "resource"},
    {RecordType::kMetadata, "metadata"},
    {RecordType::kRevisit, "revisit"},
}};

}  // namespace

std::string_view RecordTypeName(RecordType type) {
  for (const auto& [t, name] : kRecordTypeNames) {
    if (t == type) return name;
  }
  return "unknown";
}

std::optional<RecordType> ParseRecordType(std::string_view name) {
  for (const auto& [t, n] : kRecordTypeNames) {
    if (EqualsIgnoreCase(n, name)) return t;
  }
  return std::nullopt;
}

std::optional<std::string_view> FindHeader(const HeaderList& headers, std::string_view name) {
  for (const auto& [n, v] : headers) {
    if (EqualsIgnoreCase(n, name)) return std::string_view(v);
  }
  return std::nullopt;
}

struct Payload::Storage {
  std::string bytes;
  void* map = nullptr;
  std::uint64_t map_size = 0;

  Storage() = default;
  Storage(const Storage&) = delete;
  Storage& operator=(const Storage&) = delete;
  ~Storage() {
    if (map != nullptr) munmap(map, map_size);
  }

  std::string_view view() const {
    if (map != nullptr) return {static_cast<const char*>(map), map_size};
    return bytes;
  }
};

Payload::Payload() = default;

Payload::Payload(std::string bytes) {
  auto storage = std::make_shared<Storage>();
  storage->bytes = std::move(bytes);
  size_ = storage->bytes.size();
  storage_ = std::move(storage);
}

Payload Payload::FromSpillFile(int fd, std::uint64_t size) {
  Payload payload;
  auto storage = std::make_shared<Storage>();
  if (size > 0) {
    void* map = mmap(nullptr, size, PROT_READ, MAP_PRIVATE, fd, 0);
    if (map == MAP_FAILED) {
      close(fd);
      throw WarcError(WarcError::Kind::kIoFailure, "cannot map payload spill file");
    }
    storage->map = map;
    storage->map_size = size;
  }
  close(fd);
  payload.storage_ = std::move(storage);
  payload.size_ = size;
  return payload;
}

std::string_view Payload::view() const {
  return storage_ ? storage_->view().substr(offset_, size_) : std::string_view();
}

Payload Payload::Suffix(std::uint64_t from) const {
  Payload out = *this;
  from = std::min(from, size_);
  out.offset_ += from;
  out.size_ -= from;
  return out;
}

bool Payload::spilled() const { return storage_ && storage_->map != nullptr; }

std::string MediaType(std::string_view content_type_header) {
  const size_t semi = content_type_header.find(';');
  return AsciiLower(TrimWhitespace(content_type_header.substr(0, semi)));
}

std::string MakeRecordId() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<unsigned> byte(0, 255);
  std::array<unsigned, 16> b{};
  for (auto& v : b) v = byte(rng);
  b[6] = (b[6] & 0x0f) | 0x40;
  b[8] = (b[8] & 0x3f) | 0x80;
  char buf[64];
  std::snprintf(buf, sizeof(buf),
                "<urn:uuid:%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x>",
                b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11],
                b[12], b[13], b[14], b[15]);
  return buf;
}

ArchiveSource OpenWarcFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WarcError(WarcError::Kind::kIoFailure, "cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  ArchiveSource source;
  source.kind = (in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b)
                    ? SourceKind::kWarcGzip
                    : SourceKind::kWarcPlain;
  source.locator = path;
  source.id = path.string();
  return source;
}

WarcError::WarcError(Kind kind, const std::string& message)
    : std::runtime_error(std::string(WarcErrorKindName(kind)) + ": " + message), kind_(kind) {}

std::string_view WarcErrorKindName(WarcError::Kind kind) {
  switch (kind) {
    case WarcError::Kind::kTruncatedRecord: return "TruncatedRecord";
    case WarcError::Kind::kBadVersionLine: return "BadVersionLine";
    case WarcError::Kind::kBadGzipMember: return "BadGzipMember";
    case WarcError::Kind::kBadHeader: return "BadHeader";
    case WarcError::Kind::kIoFailure: return "IoFailure";
    case WarcError::Kind::kNotAZip: return "NotAZip";
    case WarcError::Kind::kNoArchiveMembers: return "NoArchiveMembers";
  }
  return "Unknown";
}

}  // namespace adreplay::warc
