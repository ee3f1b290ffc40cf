#include "adreplay/warc/warc_reader.h"

#include <random>

#include <gtest/gtest.h>

#include "adreplay/util/gzip.h"
#include "adreplay/warc/warc_writer.h"
#include "testing/fixtures.h"

namespace adreplay::warc {
namespace {

using testing::MakeResponse;
using testing::TempDir;

std::vector<CaptureRecord> RecordsOf(const std::vector<ParsedRecord>& parsed) {
  std::vector<CaptureRecord> out;
  for (const auto& p : parsed) out.push_back(p.record);
  return out;
}

TEST(WarcReaderTest, SingleWarcinfo) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {testing::MakeWarcinfo("20230822161500")};
  const ArchiveSource source = WriteWarc(records, dir / "one.warc", false);
  const auto parsed = ParseWarc(source);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].record.record_type, RecordType::kWarcinfo);
  EXPECT_EQ(parsed[0].record, records[0]);
}

TEST(WarcReaderTest, EmptyFile) {
  TempDir dir;
  for (bool gzip : {false, true}) {
    const ArchiveSource source = WriteWarc({}, dir / "empty.warc", gzip);
    EXPECT_TRUE(ParseWarc(source).empty());
  }
}

TEST(WarcReaderTest, RoundTripPlainAndGzip) {
  TempDir dir;
  std::mt19937_64 rng(11);
  const auto records = testing::RandomRecords(rng, 100);
  for (bool gzip : {false, true}) {
    const ArchiveSource source = WriteWarc(records, dir / "r.warc", gzip);
    const auto parsed = ParseWarc(OpenWarcFile(dir / "r.warc"));
    ASSERT_EQ(parsed.size(), records.size());
    for (size_t i = 0; i < records.size(); ++i) {
      EXPECT_EQ(parsed[i].record, records[i]) << "record " << i << " gzip " << gzip;
      EXPECT_EQ(parsed[i].location, source.member_offsets[i]);
      EXPECT_EQ(SerializeRecord(parsed[i].record), SerializeRecord(records[i]));
    }
  }
}

TEST(WarcReaderTest, OffsetsGiveRandomAccess) {
  TempDir dir;
  std::mt19937_64 rng(12);
  const auto records = testing::RandomRecords(rng, 30);
  for (bool gzip : {false, true}) {
    const ArchiveSource source = WriteWarc(records, dir / "r.warc", gzip);
    const auto parsed = ParseWarc(source);
    for (size_t i = parsed.size(); i-- > 0;) {
      EXPECT_EQ(ReadRecordAt(source, parsed[i].location), records[i]);
    }
  }
}

TEST(WarcReaderTest, OneMemberPerRecord) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/", "20230101000000", "text/html", "hi")};
  const ArchiveSource source = WriteWarc(records, dir / "g.warc.gz", true);
  ASSERT_EQ(source.member_offsets.size(), 1u);
  const std::string bytes = testing::ReadFile(dir / "g.warc.gz");
  EXPECT_EQ(source.member_offsets[0].length, bytes.size());
  EXPECT_EQ(OpenWarcFile(dir / "g.warc.gz").kind, SourceKind::kWarcGzip);
}

TEST(WarcReaderTest, CorruptSecondMember) {
  TempDir dir;
  std::vector<CaptureRecord> records;
  for (int i = 0; i < 3; ++i) {
    records.push_back(MakeResponse("https://h.test/" + std::to_string(i), "20230101000000",
                                   "text/plain", std::string(200, 'a' + i)));
  }
  const ArchiveSource source = WriteWarc(records, dir / "c.warc.gz", true);
  std::string bytes = testing::ReadFile(dir / "c.warc.gz");
  const ByteRange second = source.member_offsets[1];
  for (std::uint64_t i = second.offset + 12; i < second.offset + second.length - 8; ++i) {
    bytes[i] = static_cast<char>(bytes[i] ^ 0x5A);
  }
  testing::WriteFile(dir / "c.warc.gz", bytes);

  WarcReader reader(OpenWarcFile(dir / "c.warc.gz"));
  const auto first = reader.Next();
  ASSERT_TRUE(first);
  EXPECT_EQ(first->record, records[0]);
  try {
    reader.Next();
    FAIL() << "expected BadGzipMember";
  } catch (const WarcError& e) {
    EXPECT_EQ(e.kind(), WarcError::Kind::kBadGzipMember);
  }
  EXPECT_FALSE(reader.Next());
  EXPECT_EQ(first->record, records[0]);
}

TEST(WarcReaderTest, TruncatedRecord) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/", "20230101000000", "text/plain", std::string(500, 'x'))};
  WriteWarc(records, dir / "t.warc", false);
  std::string bytes = testing::ReadFile(dir / "t.warc");
  testing::WriteFile(dir / "t.warc", bytes.substr(0, bytes.size() - 100));
  try {
    ParseWarc(OpenWarcFile(dir / "t.warc"));
    FAIL() << "expected TruncatedRecord";
  } catch (const WarcError& e) {
    EXPECT_EQ(e.kind(), WarcError::Kind::kTruncatedRecord);
  }
}

TEST(WarcReaderTest, BadVersionLine) {
  TempDir dir;
  testing::WriteFile(dir / "v.warc", "HTTP/1.1 200 OK\r\n\r\n");
  try {
    ParseWarc(OpenWarcFile(dir / "v.warc"));
    FAIL() << "expected BadVersionLine";
  } catch (const WarcError& e) {
    EXPECT_EQ(e.kind(), WarcError::Kind::kBadVersionLine);
  }
}

TEST(WarcReaderTest, GoodRecordsSurviveTrailingGarbage) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/a", "20230101000000", "text/plain", "a"),
      MakeResponse("https://h.test/b", "20230101000001", "text/plain", "b")};
  WriteWarc(records, dir / "g.warc", false);
  testing::WriteFile(dir / "g.warc", testing::ReadFile(dir / "g.warc") + "garbage\r\n\r\n");
  WarcReader reader(OpenWarcFile(dir / "g.warc"));
  EXPECT_EQ(reader.Next()->record, records[0]);
  EXPECT_EQ(reader.Next()->record, records[1]);
  EXPECT_THROW(reader.Next(), WarcError);
  EXPECT_FALSE(reader.Next());
}

TEST(WarcReaderTest, AcceptsWarc10AndBareLf) {
  const std::string body = "HTTP/1.0 200 OK\nContent-Type: text/html\n\n<p>hi</p>";
  const std::string record =
      "WARC/1.0\r\nWARC-Type: response\r\nWARC-Record-ID: <urn:uuid:1>\r\n"
      "WARC-Date: 2022-12-20T09:55:18Z\r\nWARC-Target-URI: https://www.google.com/\r\n"
      "Content-Type: application/http; msgtype=response\r\n"
      "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n" + body + "\r\n\r\n";
  const CaptureRecord r = ParseRecordBytes(record);
  EXPECT_EQ(r.record_type, RecordType::kResponse);
  EXPECT_EQ(r.target_uri, "https://www.google.com/");
  EXPECT_EQ(r.http_status, 200);
  EXPECT_EQ(r.http_version, "HTTP/1.0");
  EXPECT_EQ(r.content_type, "text/html");
  EXPECT_EQ(r.payload.view(), "<p>hi</p>");
}

TEST(WarcReaderTest, LargePayloadSpills) {
  TempDir dir;
  const std::string big(300000, 'z');
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/video.mp4", "20230101000000", "video/mp4", big)};
  for (bool gzip : {false, true}) {
    const ArchiveSource source = WriteWarc(records, dir / "big.warc", gzip);
    ReadOptions options;
    options.max_in_memory_payload = 4096;
    const auto parsed = ParseWarc(source, options);
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_TRUE(parsed[0].record.payload.spilled());
    EXPECT_EQ(parsed[0].record.payload.view(), big);
    EXPECT_EQ(parsed[0].record, records[0]);
  }
}

TEST(CaptureRecordTest, HeaderLookupAndMediaType) {
  const HeaderList headers = {{"Content-Type", "Text/HTML; charset=utf-8"}, {"X-A", "1"}};
  EXPECT_EQ(FindHeader(headers, "content-type"), "Text/HTML; charset=utf-8");
  EXPECT_FALSE(FindHeader(headers, "missing"));
  EXPECT_EQ(MediaType("Text/HTML; charset=utf-8"), "text/html");
  EXPECT_EQ(ParseRecordType("revisit"), RecordType::kRevisit);
  EXPECT_FALSE(ParseRecordType("conversion2"));
  EXPECT_NE(MakeRecordId(), MakeRecordId());
}

TEST(WarcWriterTest, SerializationShape) {
  const CaptureRecord r = MakeResponse("https://h.test/", "20230822161544", "text/plain", "ok");
  const std::string bytes = SerializeRecord(r);
  EXPECT_TRUE(bytes.starts_with("WARC/1.1\r\nWARC-Type: response\r\n"));
  EXPECT_NE(bytes.find("WARC-Date: 2023-08-22T16:15:44Z\r\n"), std::string::npos);
  EXPECT_NE(bytes.find("WARC-Record-ID: " + r.record_id + "\r\n"), std::string::npos);
  EXPECT_NE(bytes.find("Content-Length: "), std::string::npos);
  EXPECT_TRUE(bytes.ends_with("ok\r\n\r\n"));

  CaptureRecord relative = r;
  relative.target_uri = "/relative";
  EXPECT_THROW(SerializeRecord(relative), std::invalid_argument);
}

}  // namespace
}  // namespace adreplay::warc
