#include "adreplay/warc/warc_reader.h"

#include <stdlib.h>
#include <unistd.h>
#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "adreplay/util/strings.h"
#include "adreplay/util/timestamp.h"

namespace adreplay::warc {

namespace {

constexpr size_t kBufferSize = 64 * 1024;
constexpr size_t kMaxLineLength = 64 * 1024;

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  // Returns 0 only at end of input.
  virtual size_t Read(char* dst, size_t n) = 0;
};

// A read-only window [base, base + limit) over a file.
class FileWindow : public ByteSource {
 public:
  FileWindow(const std::filesystem::path& path, std::uint64_t base,
             std::optional<std::uint64_t> limit)
      : file_(std::fopen(path.c_str(), "rb")), base_(base) {
    if (file_ == nullptr) {
      throw WarcError(WarcError::Kind::kIoFailure, "cannot open " + path.string());
    }
    if (limit) {
      limit_ = *limit;
    } else {
      std::error_code ec;
      const auto size = std::filesystem::file_size(path, ec);
      if (ec) throw WarcError(WarcError::Kind::kIoFailure, "cannot stat " + path.string());
      limit_ = size > base ? size - base : 0;
    }
    Seek(0);
  }
  ~FileWindow() override { std::fclose(file_); }
  FileWindow(const FileWindow&) = delete;
  FileWindow& operator=(const FileWindow&) = delete;

  void Seek(std::uint64_t pos) {
    pos_ = std::min(pos, limit_);
    if (fseeko(file_, static_cast<off_t>(base_ + pos_), SEEK_SET) != 0) {
      throw WarcError(WarcError::Kind::kIoFailure, "seek failed");
    }
  }

  std::uint64_t size() const { return limit_; }

  size_t Read(char* dst, size_t n) override {
    n = static_cast<size_t>(std::min<std::uint64_t>(n, limit_ - pos_));
    if (n == 0) return 0;
    const size_t got = std::fread(dst, 1, n, file_);
    if (got == 0 && std::ferror(file_)) {
      throw WarcError(WarcError::Kind::kIoFailure, "read failed");
    }
    pos_ += got;
    return got;
  }

 private:
  std::FILE* file_;
  std::uint64_t base_;
  std::uint64_t limit_ = 0;
  std::uint64_t pos_ = 0;
};

// Decodes exactly one gzip member starting at the window's current position.
class InflateSource : public ByteSource {
 public:
  explicit InflateSource(FileWindow& file) : file_(file) {
    if (inflateInit2(&zs_, 15 + 16) != Z_OK) {
      throw WarcError(WarcError::Kind::kBadGzipMember, "inflateInit2 failed");
    }
  }
  ~InflateSource() override { inflateEnd(&zs_); }
  InflateSource(const InflateSource&) = delete;
  InflateSource& operator=(const InflateSource&) = delete;

  size_t Read(char* dst, size_t n) override {
    while (!ended_) {
      if (zs_.avail_in == 0) {
        const size_t got = file_.Read(in_, sizeof(in_));
        if (got == 0) {
          throw WarcError(WarcError::Kind::kBadGzipMember, "member truncated");
        }
        zs_.next_in = reinterpret_cast<Bytef*>(in_);
        zs_.avail_in = static_cast<uInt>(got);
      }
      zs_.next_out = reinterpret_cast<Bytef*>(dst);
      zs_.avail_out = static_cast<uInt>(n);
      const int ret = inflate(&zs_, Z_NO_FLUSH);
      if (ret == Z_STREAM_END) {
        ended_ = true;
      } else if (ret != Z_OK && ret != Z_BUF_ERROR) {
        throw WarcError(WarcError::Kind::kBadGzipMember,
                        zs_.msg != nullptr ? zs_.msg : "inflate failed");
      }
      const size_t produced = n - zs_.avail_out;
      if (produced > 0) return produced;
    }
    return 0;
  }

  // Compressed bytes that made up the member (valid once drained).
  std::uint64_t compressed_size() const { return zs_.total_in; }

 private:
  FileWindow& file_;
  z_stream zs_{};
  char in_[kBufferSize];
  bool ended_ = false;
};

class BufferedReader {
 public:
  explicit BufferedReader(ByteSource& source) : source_(source), buf_(kBufferSize) {}

  std::uint64_t consumed() const { return consumed_; }

  int Peek() {
    if (pos_ == end_ && !Fill()) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  void Skip() {
    ++pos_;
    ++consumed_;
  }

  // Reads one line without its terminator. False at end of input when no
  // bytes were read.
  bool ReadLine(std::string& line) {
    line.clear();
    bool any = false;
    while (true) {
      if (pos_ == end_ && !Fill()) return any;
      any = true;
      const char* start = buf_.data() + pos_;
      const void* nl = std::memchr(start, '\n', end_ - pos_);
      const size_t take = nl ? static_cast<const char*>(nl) - start : end_ - pos_;
      line.append(start, take);
      pos_ += take;
      consumed_ += take;
      if (line.size() > kMaxLineLength) {
        throw WarcError(WarcError::Kind::kBadHeader, "header line too long");
      }
      if (nl) {
        Skip();
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
    }
  }

  size_t Read(char* dst, size_t n) {
    size_t total = 0;
    while (total < n) {
      if (pos_ == end_ && !Fill()) break;
      const size_t take = std::min(n - total, end_ - pos_);
      std::memcpy(dst + total, buf_.data() + pos_, take);
      pos_ += take;
      consumed_ += take;
      total += take;
    }
    return total;
  }

 private:
  bool Fill() {
    pos_ = 0;
    end_ = source_.Read(buf_.data(), buf_.size());
    return end_ > 0;
  }

  ByteSource& source_;
  std::vector<char> buf_;
  size_t pos_ = 0;
  size_t end_ = 0;
  std::uint64_t consumed_ = 0;
};

Payload ReadBlock(BufferedReader& reader, std::uint64_t length, const ReadOptions& options) {
  if (length <= options.max_in_memory_payload) {
    std::string block(length, '\0');
    if (reader.Read(block.data(), length) != length) {
      throw WarcError(WarcError::Kind::kTruncatedRecord, "block shorter than Content-Length");
    }
    return Payload(std::move(block));
  }
  std::string tmpl = (std::filesystem::temp_directory_path() / "adreplay-spill-XXXXXX").string();
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) throw WarcError(WarcError::Kind::kIoFailure, "cannot create spill file");
  unlink(tmpl.c_str());
  std::vector<char> chunk(kBufferSize);
  std::uint64_t remaining = length;
  while (remaining > 0) {
    const size_t want = static_cast<size_t>(std::min<std::uint64_t>(remaining, chunk.size()));
    const size_t got = reader.Read(chunk.data(), want);
    if (got == 0) {
      close(fd);
      throw WarcError(WarcError::Kind::kTruncatedRecord, "block shorter than Content-Length");
    }
    if (write(fd, chunk.data(), got) != static_cast<ssize_t>(got)) {
      close(fd);
      throw WarcError(WarcError::Kind::kIoFailure, "spill write failed");
    }
    remaining -= got;
  }
  return Payload::FromSpillFile(fd, length);
}

bool ParseHeaderLine(std::string_view line, std::pair<std::string, std::string>& out) {
  const size_t colon = line.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  out.first = std::string(TrimWhitespace(line.substr(0, colon)));
  out.second = std::string(TrimWhitespace(line.substr(colon + 1)));
  return !out.first.empty();
}

// Splits an HTTP message head off the block. Returns false when the block
// does not start with a recognizable status or request line.
bool ParseHttpHead(const Payload& block, CaptureRecord& record) {
  const std::string_view bytes = block.view();
  size_t head_end = bytes.find("\r\n\r\n");
  size_t body_start = head_end == std::string_view::npos ? std::string_view::npos : head_end + 4;
  const size_t lf_end = bytes.find("\n\n");
  if (lf_end != std::string_view::npos && (head_end == std::string_view::npos || lf_end < head_end)) {
    head_end = lf_end;
    body_start = lf_end + 2;
  }
  if (head_end == std::string_view::npos) {
    head_end = bytes.size();
    body_start = bytes.size();
  }
  std::string_view head = bytes.substr(0, head_end);
  std::vector<std::string_view> lines;
  for (std::string_view line : Split(head, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
  }
  if (lines.empty() || lines[0].empty()) return false;

  const std::string_view first = lines[0];
  const size_t sp1 = first.find(' ');
  if (sp1 == std::string_view::npos) return false;
  if (first.starts_with("HTTP/")) {
    const std::string_view rest = first.substr(sp1 + 1);
    const size_t sp2 = rest.find(' ');
    const std::string_view code = rest.substr(0, sp2);
    if (code.size() != 3 || !IsAllDigits(code)) return false;
    const int status = std::stoi(std::string(code));
    if (status < 100 || status > 599) return false;
    record.http_version = std::string(first.substr(0, sp1));
    record.http_status = status;
    record.http_reason = sp2 == std::string_view::npos ? "" : std::string(rest.substr(sp2 + 1));
    record.http_method.clear();
  } else {
    const size_t sp2 = first.rfind(' ');
    if (sp2 == sp1 || !first.substr(sp2 + 1).starts_with("HTTP/")) return false;
    record.http_method = std::string(first.substr(0, sp1));
    record.http_version = std::string(first.substr(sp2 + 1));
    record.http_status = 0;
    record.http_reason.clear();
  }

  record.http_headers.clear();
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    if ((line[0] == ' ' || line[0] == '\t') && !record.http_headers.empty()) {
      record.http_headers.back().second += " " + std::string(TrimWhitespace(line));
      continue;
    }
    std::pair<std::string, std::string> header;
    if (ParseHeaderLine(line, header)) record.http_headers.push_back(std::move(header));
  }
  record.payload = block.Suffix(body_start);
  const auto ct = FindHeader(record.http_headers, "Content-Type");
  record.content_type = ct ? MediaType(*ct) : "";
  return true;
}

CaptureRecord BuildRecord(const HeaderList& warc_headers, Payload block) {
  CaptureRecord record;
  std::optional<std::string> warc_content_type;
  bool have_type = false;
  for (const auto& [name, value] : warc_headers) {
    if (EqualsIgnoreCase(name, "WARC-Type")) {
      const auto type = ParseRecordType(value);
      if (!type) throw WarcError(WarcError::Kind::kBadHeader, "unknown WARC-Type " + value);
      record.record_type = *type;
      have_type = true;
    } else if (EqualsIgnoreCase(name, "WARC-Record-ID")) {
      record.record_id = value;
    } else if (EqualsIgnoreCase(name, "WARC-Date")) {
      const auto date = ParseWarcDate(value);
      if (!date) throw WarcError(WarcError::Kind::kBadHeader, "bad WARC-Date " + value);
      record.warc_date = *date;
    } else if (EqualsIgnoreCase(name, "WARC-Target-URI")) {
      std::string_view uri = value;
      if (uri.size() >= 2 && uri.front() == '<' && uri.back() == '>') {
        uri = uri.substr(1, uri.size() - 2);
      }
      record.target_uri = std::string(uri);
    } else if (EqualsIgnoreCase(name, "WARC-Payload-Digest")) {
      record.payload_digest = value;
    } else if (EqualsIgnoreCase(name, "Content-Type")) {
      warc_content_type = value;
    } else if (EqualsIgnoreCase(name, "Content-Length")) {
      // Consumed by the framing layer.
    } else {
      record.extra_warc_headers.emplace_back(name, value);
    }
  }
  if (!have_type) throw WarcError(WarcError::Kind::kBadHeader, "missing WARC-Type");
  if (record.record_id.empty()) throw WarcError(WarcError::Kind::kBadHeader, "missing WARC-Record-ID");

  const bool http_typed = record.record_type == RecordType::kRequest ||
                          record.record_type == RecordType::kResponse ||
                          record.record_type == RecordType::kRevisit;
  const bool declared_http =
      warc_content_type && MediaType(*warc_content_type) == "application/http";
  const bool sniffed_http = http_typed && !warc_content_type && block.view().starts_with("HTTP/");
  if ((declared_http || sniffed_http) && !block.empty() && ParseHttpHead(block, record)) {
    return record;
  }
  record.http_status = 0;
  record.http_method.clear();
  record.payload = std::move(block);
  record.content_type = warc_content_type ? *warc_content_type : "";
  return record;
}

// Reads the next record, or nullopt at a clean end of input.
std::optional<CaptureRecord> ReadOneRecord(BufferedReader& reader, const ReadOptions& options,
                                           std::uint64_t& record_start) {
  std::string line;
  while (true) {
    record_start = reader.consumed();
    if (!reader.ReadLine(line)) return std::nullopt;
    if (!TrimWhitespace(line).empty()) break;
  }
  if (!line.starts_with("WARC/1.")) {
    throw WarcError(WarcError::Kind::kBadVersionLine,
                    "expected WARC/1.x, got '" + line.substr(0, 40) + "'");
  }

  HeaderList headers;
  while (true) {
    if (!reader.ReadLine(line)) {
      throw WarcError(WarcError::Kind::kTruncatedRecord, "end of input inside record header");
    }
    if (line.empty()) break;
    if ((line[0] == ' ' || line[0] == '\t') && !headers.empty()) {
      headers.back().second += " " + std::string(TrimWhitespace(line));
      continue;
    }
    std::pair<std::string, std::string> header;
    if (!ParseHeaderLine(line, header)) {
      throw WarcError(WarcError::Kind::kBadHeader, "malformed header line '" + line + "'");
    }
    headers.push_back(std::move(header));
  }

  const auto length_text = FindHeader(headers, "Content-Length");
  if (!length_text || !IsAllDigits(*length_text) || length_text->size() > 18) {
    throw WarcError(WarcError::Kind::kBadHeader, "missing or invalid Content-Length");
  }
  const std::uint64_t length = std::stoull(std::string(*length_text));
  Payload block = ReadBlock(reader, length, options);

  // Record separator: CRLF CRLF, tolerated short at end of input.
  for (int i = 0; i < 4; ++i) {
    const int c = reader.Peek();
    if (c != '\r' && c != '\n') break;
    reader.Skip();
  }
  return BuildRecord(headers, std::move(block));
}

bool HasGzipMagic(FileWindow& file, std::uint64_t offset) {
  file.Seek(offset);
  unsigned char magic[2];
  const size_t got = file.Read(reinterpret_cast<char*>(magic), 2);
  file.Seek(offset);
  return got == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

}  // namespace

class WarcReader::Impl {
 public:
  Impl(const ArchiveSource& source, ReadOptions options)
      : kind_(source.kind),
        options_(options),
        file_(source.locator, source.base_offset, source.base_length) {
    if (kind_ == SourceKind::kWacz) {
      throw WarcError(WarcError::Kind::kIoFailure, "open WACZ containers with OpenWacz");
    }
    if (kind_ == SourceKind::kWarcPlain) plain_reader_ = std::make_unique<BufferedReader>(file_);
  }

  std::optional<ParsedRecord> Next() {
    if (done_) return std::nullopt;
    try {
      auto result = kind_ == SourceKind::kWarcGzip ? NextGzip() : NextPlain();
      if (!result) done_ = true;
      return result;
    } catch (...) {
      done_ = true;
      throw;
    }
  }

 private:
  std::optional<ParsedRecord> NextPlain() {
    std::uint64_t start = 0;
    auto record = ReadOneRecord(*plain_reader_, options_, start);
    if (!record) return std::nullopt;
    return ParsedRecord{std::move(*record), {start, plain_reader_->consumed() - start}};
  }

  std::optional<ParsedRecord> NextGzip() {
    while (member_offset_ < file_.size()) {
      if (!HasGzipMagic(file_, member_offset_)) {
        throw WarcError(WarcError::Kind::kBadGzipMember,
                        "no gzip member at offset " + std::to_string(member_offset_));
      }
      InflateSource inflater(file_);
      BufferedReader reader(inflater);
      std::uint64_t start = 0;
      auto record = ReadOneRecord(reader, options_, start);
      // The rest of the member may only hold separator whitespace.
      for (int c = reader.Peek(); c != -1; c = reader.Peek()) {
        if (c != '\r' && c != '\n' && c != ' ' && c != '\t') {
          throw WarcError(WarcError::Kind::kBadGzipMember,
                          "member at offset " + std::to_string(member_offset_) +
                              " holds more than one record");
        }
        reader.Skip();
      }
      const ByteRange location{member_offset_, inflater.compressed_size()};
      member_offset_ += location.length;
      if (record) return ParsedRecord{std::move(*record), location};
    }
    return std::nullopt;
  }

  SourceKind kind_;
  ReadOptions options_;
  FileWindow file_;
  std::unique_ptr<BufferedReader> plain_reader_;
  std::uint64_t member_offset_ = 0;
  bool done_ = false;
};

WarcReader::WarcReader(const ArchiveSource& source, ReadOptions options)
    : impl_(std::make_unique<Impl>(source, options)) {}

WarcReader::~WarcReader() = default;

std::optional<ParsedRecord> WarcReader::Next() { return impl_->Next(); }

std::vector<ParsedRecord> ParseWarc(const ArchiveSource& source, ReadOptions options) {
  std::vector<ParsedRecord> out;
  WarcReader reader(source, options);
  while (auto record = reader.Next()) out.push_back(std::move(*record));
  return out;
}

CaptureRecord ReadRecordAt(const ArchiveSource& source, ByteRange location, ReadOptions options) {
  FileWindow file(source.locator, source.base_offset + location.offset, location.length);
  std::uint64_t start = 0;
  std::optional<CaptureRecord> record;
  if (source.kind == SourceKind::kWarcGzip) {
    InflateSource inflater(file);
    BufferedReader reader(inflater);
    record = ReadOneRecord(reader, options, start);
  } else {
    BufferedReader reader(file);
    record = ReadOneRecord(reader, options, start);
  }
  if (!record) throw WarcError(WarcError::Kind::kTruncatedRecord, "no record at location");
  return std::move(*record);
}

namespace {

class StringSource : public ByteSource {
 public:
  explicit StringSource(std::string_view bytes) : bytes_(bytes) {}
  size_t Read(char* dst, size_t n) override {
    n = std::min(n, bytes_.size());
    std::memcpy(dst, bytes_.data(), n);
    bytes_.remove_prefix(n);
    return n;
  }

 private:
  std::string_view bytes_;
};

}  // namespace

CaptureRecord ParseRecordBytes(std::string_view bytes) {
  StringSource source(bytes);
  BufferedReader reader(source);
  std::uint64_t start = 0;
  auto record = ReadOneRecord(reader, ReadOptions{}, start);
  if (!record) throw WarcError(WarcError::Kind::kTruncatedRecord, "empty input");
  return std::move(*record);
}

}  // namespace adreplay::warc
