#include "testing/fixtures.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adreplay/util/digest.h"
#include "adreplay/util/gzip.h"
#include "adreplay/util/timestamp.h"
#include "adreplay/warc/warc_writer.h"

namespace adreplay::testing {

TempDir::TempDir() {
  std::string pattern = (std::filesystem::temp_directory_path() / "adreplay-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::chrono::sys_seconds TimeOf(std::string_view timestamp14) {
  const auto ts = Timestamp14::Parse(timestamp14);
  if (!ts) throw std::invalid_argument("bad timestamp " + std::string(timestamp14));
  return ts->time();
}

warc::CaptureRecord MakeResponse(std::string_view uri, std::string_view timestamp14,
                                 std::string_view mime, std::string_view body, int status) {
  warc::CaptureRecord r;
  r.record_type = warc::RecordType::kResponse;
  r.target_uri = std::string(uri);
  r.warc_date = TimeOf(timestamp14);
  r.record_id = warc::MakeRecordId();
  r.http_status = status;
  r.http_reason = status == 200 ? "OK" : (status == 404 ? "Not Found" : "Status");
  r.http_headers = {{"Content-Type", std::string(mime)},
                    {"Content-Length", std::to_string(body.size())}};
  r.payload = warc::Payload(std::string(body));
  r.content_type = warc::MediaType(mime);
  r.payload_digest = Sha1Base32Digest(body);
  return r;
}

warc::CaptureRecord MakeRequest(std::string_view uri, std::string_view timestamp14) {
  warc::CaptureRecord r;
  r.record_type = warc::RecordType::kRequest;
  r.target_uri = std::string(uri);
  r.warc_date = TimeOf(timestamp14);
  r.record_id = warc::MakeRecordId();
  r.http_method = "GET";
  r.http_headers = {{"User-Agent", "fixture"}};
  return r;
}

warc::CaptureRecord MakeWarcinfo(std::string_view timestamp14) {
  warc::CaptureRecord r;
  r.record_type = warc::RecordType::kWarcinfo;
  r.warc_date = TimeOf(timestamp14);
  r.record_id = warc::MakeRecordId();
  r.content_type = "application/warc-fields";
  r.payload = warc::Payload(std::string("software: adreplay-fixture\r\nformat: WARC/1.1\r\n"));
  return r;
}

warc::CaptureRecord MakeRevisit(std::string_view uri, std::string_view timestamp14,
                                std::string_view digest) {
  warc::CaptureRecord r;
  r.record_type = warc::RecordType::kRevisit;
  r.target_uri = std::string(uri);
  r.warc_date = TimeOf(timestamp14);
  r.record_id = warc::MakeRecordId();
  r.payload_digest = std::string(digest);
  r.extra_warc_headers = {
      {"WARC-Profile", "http://netpreserve.org/warc/1.1/revisit/identical-payload-digest"}};
  r.http_status = 200;
  r.http_reason = "OK";
  r.http_headers = {{"Content-Type", "text/html"}};
  r.content_type = "text/html";
  return r;
}

std::string MakeGif(std::uint16_t width, std::uint16_t height) {
  std::string g = "GIF89a";
  g += static_cast<char>(width & 0xFF);
  g += static_cast<char>(width >> 8);
  g += static_cast<char>(height & 0xFF);
  g += static_cast<char>(height >> 8);
  g += std::string("\x80\x00\x00\x00\x00\x00\xff\xff\xff", 9);
  g += std::string("\x2c\x00\x00\x00\x00\x01\x00\x01\x00\x00\x02\x02\x44\x01\x00\x3b", 16);
  return g;
}

std::string MakePng(std::uint32_t width, std::uint32_t height) {
  const auto be32 = [](std::uint32_t v) {
    std::string s(4, '\0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (24 - 8 * i)) & 0xFF);
    return s;
  };
  std::string ihdr = "IHDR" + be32(width) + be32(height) + std::string("\x08\x02\x00\x00\x00", 5);
  std::string png = "\x89PNG\r\n\x1a\n";
  png += be32(13) + ihdr + be32(static_cast<std::uint32_t>(Crc32(ihdr)));
  const std::string iend = "IEND";
  png += be32(0) + iend + be32(static_cast<std::uint32_t>(Crc32(iend)));
  return png;
}

namespace {

std::string RandomToken(std::mt19937_64& rng, size_t min_len, size_t max_len,
                        std::string_view alphabet) {
  std::uniform_int_distribution<size_t> len(min_len, max_len);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char& c : s) c = alphabet[pick(rng)];
  return s;
}

constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kValueChars =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ;=/,.-_";

std::string RandomValue(std::mt19937_64& rng) {
  std::string v = RandomToken(rng, 1, 24, kValueChars);
  // Header values are stored trimmed.
  while (!v.empty() && v.back() == ' ') v.back() = 'x';
  while (!v.empty() && v.front() == ' ') v.front() = 'x';
  return v;
}

std::string RandomBytes(std::mt19937_64& rng, size_t max_len) {
  std::uniform_int_distribution<size_t> len(0, max_len);
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s(len(rng), '\0');
  for (char& c : s) c = static_cast<char>(byte(rng));
  return s;
}

}  // namespace

std::vector<warc::CaptureRecord> RandomRecords(std::mt19937_64& rng, size_t n) {
  std::vector<warc::CaptureRecord> out;
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<std::int64_t> when(0, 4'000'000'000);
  std::uniform_int_distribution<int> small(0, 4);
  std::uniform_int_distribution<int> status(100, 599);
  for (size_t i = 0; i < n; ++i) {
    warc::CaptureRecord r;
    r.record_id = warc::MakeRecordId();
    r.warc_date = std::chrono::sys_seconds(std::chrono::seconds(when(rng)));
    const std::string uri = (small(rng) % 2 ? "https://" : "http://") +
                            RandomToken(rng, 1, 12, kAlnum) + ".test/" +
                            RandomToken(rng, 0, 20, kAlnum) +
                            (small(rng) == 0 ? "?q=" + RandomToken(rng, 1, 8, kAlnum) : "");
    switch (kind(rng)) {
      case 0:
        r.record_type = warc::RecordType::kWarcinfo;
        r.content_type = "application/warc-fields";
        r.payload = warc::Payload(RandomBytes(rng, 200));
        break;
      case 1:
        r.record_type = warc::RecordType::kMetadata;
        r.target_uri = uri;
        r.content_type = "application/warc-fields";
        r.payload = warc::Payload(RandomBytes(rng, 200));
        break;
      case 2:
        r.record_type = warc::RecordType::kResource;
        r.target_uri = uri;
        r.content_type = "image/png";
        r.payload = warc::Payload(RandomBytes(rng, 2000));
        break;
      case 3:
        r.record_type = warc::RecordType::kRequest;
        r.target_uri = uri;
        r.http_method = small(rng) == 0 ? "POST" : "GET";
        for (int h = small(rng); h > 0; --h) {
          r.http_headers.emplace_back("X-" + RandomToken(rng, 1, 10, kAlnum), RandomValue(rng));
        }
        r.payload = warc::Payload(r.http_method == "POST" ? RandomBytes(rng, 300) : "");
        break;
      case 4:
      case 5: {
        const bool revisit = small(rng) == 0;
        r.record_type = revisit ? warc::RecordType::kRevisit : warc::RecordType::kResponse;
        r.target_uri = uri;
        r.http_status = status(rng);
        r.http_reason = small(rng) == 0 ? "" : RandomToken(rng, 1, 10, "ABCDEFGHIJKLMNOPQRSTUVWXYZ");
        const std::string mime = small(rng) % 2 ? "text/html" : "image/jpeg";
        r.http_headers.emplace_back("Content-Type", mime);
        for (int h = small(rng); h > 0; --h) {
          r.http_headers.emplace_back("X-" + RandomToken(rng, 1, 10, kAlnum), RandomValue(rng));
        }
        r.content_type = mime;
        const std::string body = revisit ? "" : RandomBytes(rng, 3000);
        r.payload = warc::Payload(body);
        r.payload_digest = Sha1Base32Digest(body);
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

StandardFixture MakeStandardFixture() {
  StandardFixture f;
  f.ad_page_url =
      "https://s0.2mdn.net/sadbundle/13045786678919115269/"
      "CCD2C_5568424_300x600_MF_CP_APPLY_NA_NR_EN_V1_H5_BD_2022_042025/index.html";
  f.jpeg_urls = {"https://h.test/a.jpg", "https://tpc.googlesyndication.com/simgad/123.jpg"};
  f.records.push_back(MakeWarcinfo("20230822161500"));
  f.records.push_back(MakeRequest("https://www.ign.com/", "20230822161544"));
  f.records.push_back(MakeResponse("https://www.ign.com/", "20230822161544", "text/html",
                                   "<html><head></head><body>home</body></html>"));
  f.records.push_back(MakeRequest("https://h.test/a.jpg", "20230822161545"));
  f.records.push_back(MakeResponse(f.jpeg_urls[0], "20230822161545", "image/jpeg", "\xFF\xD8jpeg-a"));
  f.records.push_back(MakeResponse(f.jpeg_urls[1], "20230822161546", "image/jpeg", "\xFF\xD8jpeg-b"));
  f.records.push_back(MakeResponse("https://h.test/b.png", "20230822161547", "image/png", MakePng(300, 250)));
  f.records.push_back(MakeResponse(f.ad_page_url, "20230822161548", "text/html",
                                   "<html><body>ad</body></html>"));
  f.records.push_back(MakeResponse("https://s0.2mdn.net/ads/studio/Enabler.js", "20230822161549",
                                   "application/javascript", "var Enabler={};"));
  f.records.push_back(MakeResponse("https://h.test/style.css", "20230822161550", "text/css",
                                   "body{background:url(bg.png)}"));
  for (const auto& r : f.records) {
    if (r.record_type == warc::RecordType::kResponse) ++f.response_count;
    if (r.record_type == warc::RecordType::kRequest) ++f.request_count;
  }
  return f;
}

GalleryFixture MakeGalleryFixture() {
  GalleryFixture f;
  f.seed_url = "https://www.ign.com/tv/the-last-of-us-the-series";
  f.records.push_back(MakeWarcinfo("20230822161500"));
  f.records.push_back(MakeResponse(f.seed_url, "20230822161544", "text/html",
                                   "<html><head></head><body>page</body></html>"));
  f.records.push_back(MakeResponse("https://tpc.googlesyndication.com/simgad/1.png",
                                   "20230822161545", "image/png", MakePng(300, 250)));
  f.records.push_back(MakeResponse("https://s0.2mdn.net/ads/banner.gif", "20230822161546",
                                   "image/gif", MakeGif(728, 90)));
  f.records.push_back(MakeResponse("https://s-static.innovid.com/media/ad.mp4", "20230822161547",
                                   "video/mp4", "....ftypmp42"));
  f.records.push_back(MakeResponse("https://h.test/pixel.gif", "20230822161548", "image/gif",
                                   MakeGif(1, 1)));
  f.records.push_back(MakeResponse("https://h.test/app.js", "20230822161549",
                                   "application/javascript", "void 0;"));
  f.expected_urls = {"https://tpc.googlesyndication.com/simgad/1.png",
                     "https://s0.2mdn.net/ads/banner.gif",
                     "https://s-static.innovid.com/media/ad.mp4"};
  return f;
}

cdx::CaptureIndex IndexOf(const std::vector<warc::CaptureRecord>& records,
                          const std::filesystem::path& dir, std::string_view name) {
  const warc::ArchiveSource source = warc::WriteWarc(records, dir / name, false);
  return cdx::BuildIndex(std::span(&source, 1)).index;
}

}  // namespace adreplay::testing
