#ifndef ADREPLAY_WARC_ZIP_H_
#define ADREPLAY_WARC_ZIP_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace adreplay::warc {

struct ZipEntry {
  std::string name;
  std::uint16_t method = 0;  // 0 stored, 8 deflated
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  std::uint32_t crc32 = 0;
  std::uint64_t local_header_offset = 0;
  std::uint64_t data_offset = 0;  // first byte of the entry's data
};

// Central-directory reader (ZIP64 aware). Throws WarcError(kNotAZip).
class ZipReader {
 public:
  static ZipReader Open(const std::filesystem::path& path);

  const std::vector<ZipEntry>& entries() const { return entries_; }
  const std::filesystem::path& path() const { return path_; }

  std::string Extract(const ZipEntry& entry) const;

 private:
  std::filesystem::path path_;
  std::vector<ZipEntry> entries_;
};

// Minimal writer used for building collections and fixtures.
class ZipWriter {
 public:
  explicit ZipWriter(const std::filesystem::path& path);

  void Add(const std::string& name, std::string_view bytes, bool deflate = false);
  void Finish();

 private:
  std::ofstream out_;
  std::uint64_t offset_ = 0;
  std::string central_;
  std::uint16_t count_ = 0;
  bool finished_ = false;
};

}  // namespace adreplay::warc

#endif  // ADREPLAY_WARC_ZIP_H_
