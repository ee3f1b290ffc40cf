#include "adreplay/warc/zip.h"

#include <algorithm>
#include <limits>

#include "adreplay/util/gzip.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::warc {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralSig = 0x06054b50;
constexpr std::uint32_t kZip64EndSig = 0x06064b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;

std::uint64_t ReadLe(std::string_view bytes, size_t pos, int width) {
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(bytes[pos + i]);
  }
  return v;
}

void PutLe(std::string& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

[[noreturn]] void NotAZip(const std::string& why) {
  throw WarcError(WarcError::Kind::kNotAZip, why);
}

std::string ReadRange(std::ifstream& in, std::uint64_t offset, std::uint64_t length) {
  std::string bytes(length, '\0');
  in.seekg(static_cast<std::streamoff>(offset));
  in.read(bytes.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::uint64_t>(in.gcount()) != length) NotAZip("unexpected end of file");
  return bytes;
}

}  // namespace

ZipReader ZipReader::Open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WarcError(WarcError::Kind::kIoFailure, "cannot open " + path.string());
  std::error_code ec;
  const std::uint64_t file_size = std::filesystem::file_size(path, ec);
  if (ec || file_size < 22) NotAZip(path.string() + " is too small to be a ZIP");

  const std::uint64_t tail_len = std::min<std::uint64_t>(file_size, 65535 + 22);
  const std::string tail = ReadRange(in, file_size - tail_len, tail_len);
  size_t eocd = std::string::npos;
  for (size_t i = tail.size() - 22 + 1; i-- > 0;) {
    if (ReadLe(tail, i, 4) == kEndOfCentralSig) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos) NotAZip(path.string() + " has no end-of-central-directory");

  std::uint64_t total_entries = ReadLe(tail, eocd + 10, 2);
  std::uint64_t cd_size = ReadLe(tail, eocd + 12, 4);
  std::uint64_t cd_offset = ReadLe(tail, eocd + 16, 4);
  if (eocd >= 20 && ReadLe(tail, eocd - 20, 4) == kZip64LocatorSig) {
    const std::uint64_t z64_offset = ReadLe(tail, eocd - 20 + 8, 8);
    const std::string z64 = ReadRange(in, z64_offset, 56);
    if (ReadLe(z64, 0, 4) != kZip64EndSig) NotAZip("bad ZIP64 end record");
    total_entries = ReadLe(z64, 32, 8);
    cd_size = ReadLe(z64, 40, 8);
    cd_offset = ReadLe(z64, 48, 8);
  }
  if (cd_offset + cd_size > file_size) NotAZip("central directory out of bounds");

  ZipReader reader;
  reader.path_ = path;
  const std::string cd = ReadRange(in, cd_offset, cd_size);
  size_t pos = 0;
  for (std::uint64_t n = 0; n < total_entries; ++n) {
    if (pos + 46 > cd.size() || ReadLe(cd, pos, 4) != kCentralHeaderSig) {
      NotAZip("corrupt central directory");
    }
    ZipEntry entry;
    entry.method = static_cast<std::uint16_t>(ReadLe(cd, pos + 10, 2));
    entry.crc32 = static_cast<std::uint32_t>(ReadLe(cd, pos + 16, 4));
    entry.compressed_size = ReadLe(cd, pos + 20, 4);
    entry.uncompressed_size = ReadLe(cd, pos + 24, 4);
    const size_t name_len = ReadLe(cd, pos + 28, 2);
    const size_t extra_len = ReadLe(cd, pos + 30, 2);
    const size_t comment_len = ReadLe(cd, pos + 32, 2);
    entry.local_header_offset = ReadLe(cd, pos + 42, 4);
    if (pos + 46 + name_len + extra_len + comment_len > cd.size()) {
      NotAZip("corrupt central directory entry");
    }
    entry.name = cd.substr(pos + 46, name_len);

    // ZIP64 extended information replaces saturated fields, in order.
    const std::string_view extra = std::string_view(cd).substr(pos + 46 + name_len, extra_len);
    size_t e = 0;
    while (e + 4 <= extra.size()) {
      const auto id = ReadLe(extra, e, 2);
      const auto len = ReadLe(extra, e + 2, 2);
      if (id == 0x0001) {
        size_t f = e + 4;
        const auto take = [&](std::uint64_t& field, std::uint64_t saturated) {
          if (field == saturated && f + 8 <= e + 4 + len) {
            field = ReadLe(extra, f, 8);
            f += 8;
          }
        };
        take(entry.uncompressed_size, 0xffffffff);
        take(entry.compressed_size, 0xffffffff);
        take(entry.local_header_offset, 0xffffffff);
      }
      e += 4 + len;
    }

    const std::string local = ReadRange(in, entry.local_header_offset, 30);
    if (ReadLe(local, 0, 4) != kLocalHeaderSig) NotAZip("bad local header for " + entry.name);
    entry.data_offset =
        entry.local_header_offset + 30 + ReadLe(local, 26, 2) + ReadLe(local, 28, 2);
    reader.entries_.push_back(std::move(entry));
    pos += 46 + name_len + extra_len + comment_len;
  }
  return reader;
}

std::string ZipReader::Extract(const ZipEntry& entry) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw WarcError(WarcError::Kind::kIoFailure, "cannot open " + path_.string());
  std::string data = ReadRange(in, entry.data_offset, entry.compressed_size);
  if (entry.method == 0) return data;
  if (entry.method == 8) {
    try {
      return InflateRaw(data, entry.uncompressed_size);
    } catch (const CompressionError& e) {
      NotAZip("cannot inflate " + entry.name + ": " + e.what());
    }
  }
  NotAZip("unsupported compression method for " + entry.name);
}

ZipWriter::ZipWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw WarcError(WarcError::Kind::kIoFailure, "cannot create " + path.string());
}

void ZipWriter::Add(const std::string& name, std::string_view bytes, bool deflate) {
  const std::string compressed = deflate ? DeflateRaw(bytes) : std::string();
  const std::string_view data = deflate ? std::string_view(compressed) : bytes;
  if (data.size() > std::numeric_limits<std::uint32_t>::max() ||
      bytes.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw WarcError(WarcError::Kind::kIoFailure, "ZIP64 output is not supported");
  }
  const std::uint32_t crc = static_cast<std::uint32_t>(Crc32(bytes));
  const std::uint16_t method = deflate ? 8 : 0;
  constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

  std::string local;
  PutLe(local, kLocalHeaderSig, 4);
  PutLe(local, 20, 2);  // version needed
  PutLe(local, 0, 2);   // flags
  PutLe(local, method, 2);
  PutLe(local, 0, 2);  // time
  PutLe(local, kDosDate, 2);
  PutLe(local, crc, 4);
  PutLe(local, data.size(), 4);
  PutLe(local, bytes.size(), 4);
  PutLe(local, name.size(), 2);
  PutLe(local, 0, 2);
  local += name;
  out_.write(local.data(), static_cast<std::streamsize>(local.size()));
  out_.write(data.data(), static_cast<std::streamsize>(data.size()));

  PutLe(central_, kCentralHeaderSig, 4);
  PutLe(central_, 20, 2);  // version made by
  PutLe(central_, 20, 2);
  PutLe(central_, 0, 2);
  PutLe(central_, method, 2);
  PutLe(central_, 0, 2);
  PutLe(central_, kDosDate, 2);
  PutLe(central_, crc, 4);
  PutLe(central_, data.size(), 4);
  PutLe(central_, bytes.size(), 4);
  PutLe(central_, name.size(), 2);
  PutLe(central_, 0, 2);  // extra
  PutLe(central_, 0, 2);  // comment
  PutLe(central_, 0, 2);  // disk
  PutLe(central_, 0, 2);  // internal attrs
  PutLe(central_, 0, 4);  // external attrs
  PutLe(central_, offset_, 4);
  central_ += name;

  offset_ += local.size() + data.size();
  ++count_;
}

void ZipWriter::Finish() {
  if (finished_) return;
  finished_ = true;
  std::string end;
  PutLe(end, kEndOfCentralSig, 4);
  PutLe(end, 0, 2);
  PutLe(end, 0, 2);
  PutLe(end, count_, 2);
  PutLe(end, count_, 2);
  PutLe(end, central_.size(), 4);
  PutLe(end, offset_, 4);
  PutLe(end, 0, 2);
  out_.write(central_.data(), static_cast<std::streamsize>(central_.size()));
  out_.write(end.data(), static_cast<std::streamsize>(end.size()));
  out_.flush();
  if (!out_) throw WarcError(WarcError::Kind::kIoFailure, "ZIP write failed");
}

}  // namespace adreplay::warc
