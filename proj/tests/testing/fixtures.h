#ifndef ADREPLAY_TESTS_TESTING_FIXTURES_H_
#define ADREPLAY_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/cdx/capture_index.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::testing {

// Removed with its contents on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view bytes);

std::chrono::sys_seconds TimeOf(std::string_view timestamp14);

warc::CaptureRecord MakeResponse(std::string_view uri, std::string_view timestamp14,
                                 std::string_view mime, std::string_view body, int status = 200);
warc::CaptureRecord MakeRequest(std::string_view uri, std::string_view timestamp14);
warc::CaptureRecord MakeWarcinfo(std::string_view timestamp14);
warc::CaptureRecord MakeRevisit(std::string_view uri, std::string_view timestamp14,
                                std::string_view digest);

// Minimal images carrying only what a header probe needs.
std::string MakeGif(std::uint16_t width, std::uint16_t height);
std::string MakePng(std::uint32_t width, std::uint32_t height);

// Records whose fields survive a write/parse cycle exactly.
std::vector<warc::CaptureRecord> RandomRecords(std::mt19937_64& rng, size_t n);

// A small crawl: a warcinfo, 2 requests and 7 responses with known MIME
// types, among them the 2mdn.net embedded ad page.
struct StandardFixture {
  std::vector<warc::CaptureRecord> records;
  size_t response_count = 0;
  size_t request_count = 0;
  std::vector<std::string> jpeg_urls;
  std::string ad_page_url;
};
StandardFixture MakeStandardFixture();

// A containing page plus 2 images, 1 video and a pixel.gif.
struct GalleryFixture {
  std::vector<warc::CaptureRecord> records;
  std::string seed_url;
  std::vector<std::string> expected_urls;  // visible non-seed captures
};
GalleryFixture MakeGalleryFixture();

cdx::CaptureIndex IndexOf(const std::vector<warc::CaptureRecord>& records,
                          const std::filesystem::path& dir, std::string_view name = "fixture.warc");

}  // namespace adreplay::testing

#endif  // ADREPLAY_TESTS_TESTING_FIXTURES_H_
