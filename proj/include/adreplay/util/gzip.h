#ifndef ADREPLAY_UTIL_GZIP_H_
#define ADREPLAY_UTIL_GZIP_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace adreplay {

class CompressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One complete gzip member.
std::string GzipCompress(std::string_view bytes);

// Decodes a gzip stream, concatenated members included.
std::string GzipDecompress(std::string_view bytes);

// Content-Encoding: deflate, which in practice is either zlib-wrapped or raw.
std::string InflateHttpDeflate(std::string_view bytes);

// Raw deflate (ZIP method 8).
std::string InflateRaw(std::string_view bytes, size_t size_hint = 0);
std::string DeflateRaw(std::string_view bytes);

unsigned long Crc32(std::string_view bytes);

}  // namespace adreplay

#endif  // ADREPLAY_UTIL_GZIP_H_
