#include "adreplay/util/gzip.h"

#include <zlib.h>

#include <algorithm>
#include <limits>

namespace adreplay {

namespace {

constexpr int kGzipWindowBits = 15 + 16;
constexpr int kRawWindowBits = -15;
constexpr size_t kChunk = 64 * 1024;

std::string Deflate(std::string_view bytes, int window_bits) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, window_bits, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw CompressionError("deflateInit2 failed");
  }
  std::string out;
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  int ret;
  do {
    char buf[kChunk];
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    ret = deflate(&zs, Z_FINISH);
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (ret == Z_OK || ret == Z_BUF_ERROR);
  deflateEnd(&zs);
  if (ret != Z_STREAM_END) throw CompressionError("deflate failed");
  return out;
}

// Inflates members until the input is exhausted. With `multi_member` false
// only the first stream is decoded.
std::string Inflate(std::string_view bytes, int window_bits, bool multi_member,
                    size_t size_hint) {
  std::string out;
  out.reserve(size_hint);
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) throw CompressionError("inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  while (true) {
    char buf[kChunk];
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    const int ret = inflate(&zs, Z_NO_FLUSH);
    out.append(buf, sizeof(buf) - zs.avail_out);
    if (ret == Z_STREAM_END) {
      if (!multi_member || zs.avail_in == 0) break;
      inflateReset(&zs);
      continue;
    }
    if (ret != Z_OK) {
      inflateEnd(&zs);
      throw CompressionError(zs.msg ? zs.msg : "inflate failed");
    }
    if (zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw CompressionError("truncated compressed stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace

std::string GzipCompress(std::string_view bytes) { return Deflate(bytes, kGzipWindowBits); }

std::string GzipDecompress(std::string_view bytes) {
  return Inflate(bytes, kGzipWindowBits, /*multi_member=*/true, bytes.size() * 3);
}

std::string InflateHttpDeflate(std::string_view bytes) {
  try {
    return Inflate(bytes, 15, false, bytes.size() * 3);
  } catch (const CompressionError&) {
    return Inflate(bytes, kRawWindowBits, false, bytes.size() * 3);
  }
}

std::string InflateRaw(std::string_view bytes, size_t size_hint) {
  return Inflate(bytes, kRawWindowBits, false, size_hint);
}

std::string DeflateRaw(std::string_view bytes) { return Deflate(bytes, kRawWindowBits); }

unsigned long Crc32(std::string_view bytes) {
  unsigned long crc = crc32(0L, Z_NULL, 0);
  while (!bytes.empty()) {
    const size_t n = std::min<size_t>(bytes.size(), std::numeric_limits<uInt>::max());
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(n));
    bytes.remove_prefix(n);
  }
  return crc;
}

}  // namespace adreplay
