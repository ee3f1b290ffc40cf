#include "adreplay/warc/warc_writer.h"

#include <fstream>
#include <stdexcept>

#include "adreplay/util/gzip.h"
#include "adreplay/util/timestamp.h"
#include "adreplay/util/url.h"

namespace adreplay::warc {

namespace {

void AppendHeader(std::string& out, std::string_view name, std::string_view value) {
  out.append(name).append(": ").append(value).append("\r\n");
}

void Validate(const CaptureRecord& record) {
  if (record.record_id.empty()) throw std::invalid_argument("record_id is required");
  const bool needs_target = record.record_type == RecordType::kRequest ||
                            record.record_type == RecordType::kResponse ||
                            record.record_type == RecordType::kResource ||
                            record.record_type == RecordType::kRevisit;
  if (needs_target && !IsAbsoluteUri(record.target_uri)) {
    throw std::invalid_argument("target_uri must be absolute: '" + record.target_uri + "'");
  }
  if (record.record_type == RecordType::kResponse && record.has_http_message() &&
      (record.http_status < 100 || record.http_status > 599)) {
    throw std::invalid_argument("http_status out of range");
  }
}

std::string RequestTarget(std::string_view uri) {
  const UriReference ref = SplitUriReference(uri);
  std::string target = ref.path.empty() ? "/" : ref.path;
  if (ref.query) target += "?" + *ref.query;
  return target;
}

std::string HttpBlock(const CaptureRecord& record) {
  std::string block;
  if (!record.http_method.empty()) {
    block = record.http_method + " " + RequestTarget(record.target_uri) + " " +
            record.http_version + "\r\n";
  } else {
    block = record.http_version + " " + std::to_string(record.http_status);
    if (!record.http_reason.empty()) block += " " + record.http_reason;
    block += "\r\n";
  }
  for (const auto& [name, value] : record.http_headers) AppendHeader(block, name, value);
  block += "\r\n";
  block.append(record.payload.view());
  return block;
}

}  // namespace

std::string SerializeRecord(const CaptureRecord& record) {
  Validate(record);
  std::string block;
  std::string content_type;
  if (record.has_http_message()) {
    block = HttpBlock(record);
    content_type = record.http_method.empty() ? "application/http; msgtype=response"
                                              : "application/http; msgtype=request";
  } else {
    block = std::string(record.payload.view());
    content_type = record.content_type;
  }

  std::string out = "WARC/1.1\r\n";
  AppendHeader(out, "WARC-Type", RecordTypeName(record.record_type));
  AppendHeader(out, "WARC-Record-ID", record.record_id);
  AppendHeader(out, "WARC-Date", FormatWarcDate(record.warc_date));
  if (!record.target_uri.empty()) AppendHeader(out, "WARC-Target-URI", record.target_uri);
  if (!record.payload_digest.empty()) {
    AppendHeader(out, "WARC-Payload-Digest", record.payload_digest);
  }
  for (const auto& [name, value] : record.extra_warc_headers) AppendHeader(out, name, value);
  if (!content_type.empty()) AppendHeader(out, "Content-Type", content_type);
  AppendHeader(out, "Content-Length", std::to_string(block.size()));
  out += "\r\n";
  out += block;
  out += "\r\n\r\n";
  return out;
}

ArchiveSource WriteWarc(std::span<const CaptureRecord> records,
                        const std::filesystem::path& path, bool gzip) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WarcError(WarcError::Kind::kIoFailure, "cannot create " + path.string());
  ArchiveSource source;
  source.kind = gzip ? SourceKind::kWarcGzip : SourceKind::kWarcPlain;
  source.locator = path;
  source.id = path.string();
  std::uint64_t offset = 0;
  for (const CaptureRecord& record : records) {
    std::string bytes = SerializeRecord(record);
    if (gzip) bytes = GzipCompress(bytes);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    source.member_offsets.push_back({offset, bytes.size()});
    offset += bytes.size();
  }
  out.flush();
  if (!out) throw WarcError(WarcError::Kind::kIoFailure, "write failed for " + path.string());
  return source;
}

}  // namespace adreplay::warc
