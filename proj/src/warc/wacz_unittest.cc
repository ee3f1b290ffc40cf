#include "adreplay/warc/wacz.h"

#include <gtest/gtest.h>

#include "adreplay/warc/warc_reader.h"
#include "adreplay/warc/warc_writer.h"
#include "adreplay/warc/zip.h"
#include "testing/fixtures.h"

namespace adreplay::warc {
namespace {

using testing::MakeResponse;
using testing::TempDir;

TEST(WaczTest, SingleGzipMember) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/", "20230101000000", "text/html", "<p>x</p>")};
  WriteWarc(records, dir / "data.warc.gz", true);
  const std::vector<std::filesystem::path> warcs = {dir / "data.warc.gz"};
  WriteWacz(warcs, dir / "c.wacz");
  const auto sources = OpenWacz(dir / "c.wacz");
  ASSERT_EQ(sources.size(), 1u);
  EXPECT_EQ(sources[0].kind, SourceKind::kWarcGzip);
  const auto parsed = ParseWarc(sources[0]);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].record, records[0]);
  EXPECT_EQ(ReadRecordAt(sources[0], parsed[0].location), records[0]);
}

TEST(WaczTest, ThreeWarcsKeepRecordCount) {
  TempDir dir;
  std::mt19937_64 rng(5);
  std::vector<std::filesystem::path> warcs;
  size_t total = 0;
  for (int i = 0; i < 3; ++i) {
    const auto records = testing::RandomRecords(rng, 5 + i * 3);
    total += records.size();
    warcs.push_back(dir / ("part" + std::to_string(i) + (i == 1 ? ".warc" : ".warc.gz")));
    WriteWarc(records, warcs.back(), i != 1);
  }
  WriteWacz(warcs, dir / "three.wacz");
  const auto sources = OpenWacz(dir / "three.wacz");
  ASSERT_EQ(sources.size(), 3u);
  size_t parsed = 0;
  for (const auto& s : sources) parsed += ParseWarc(s).size();
  EXPECT_EQ(parsed, total);
}

TEST(WaczTest, DeflatedMemberIsExtracted) {
  TempDir dir;
  const std::vector<CaptureRecord> records = {
      MakeResponse("https://h.test/a", "20230101000000", "text/plain", std::string(5000, 'q'))};
  WriteWarc(records, dir / "d.warc", false);
  {
    ZipWriter zip(dir / "d.wacz");
    zip.Add("datapackage.json", "{}");
    zip.Add("archive/d.warc", testing::ReadFile(dir / "d.warc"), true);
    zip.Finish();
  }
  const auto sources = OpenWacz(dir / "d.wacz");
  ASSERT_EQ(sources.size(), 1u);
  const auto parsed = ParseWarc(sources[0]);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].record, records[0]);
}

TEST(WaczTest, NoArchiveMembers) {
  TempDir dir;
  {
    ZipWriter zip(dir / "n.wacz");
    zip.Add("datapackage.json", "{}");
    zip.Add("indexes/index.cdx", "x");
    zip.Finish();
  }
  try {
    OpenWacz(dir / "n.wacz");
    FAIL();
  } catch (const WarcError& e) {
    EXPECT_EQ(e.kind(), WarcError::Kind::kNoArchiveMembers);
  }
}

TEST(WaczTest, NotAZip) {
  TempDir dir;
  testing::WriteFile(dir / "x.wacz", "this is not a zip file at all");
  try {
    OpenWacz(dir / "x.wacz");
    FAIL();
  } catch (const WarcError& e) {
    EXPECT_EQ(e.kind(), WarcError::Kind::kNotAZip);
  }
}

TEST(ZipTest, StoredAndDeflatedRoundTrip) {
  TempDir dir;
  {
    ZipWriter zip(dir / "z.zip");
    zip.Add("a.txt", "alpha");
    zip.Add("b.txt", std::string(10000, 'b'), true);
    zip.Finish();
  }
  const ZipReader reader = ZipReader::Open(dir / "z.zip");
  ASSERT_EQ(reader.entries().size(), 2u);
  EXPECT_EQ(reader.entries()[0].method, 0);
  EXPECT_EQ(reader.entries()[1].method, 8);
  EXPECT_EQ(reader.Extract(reader.entries()[0]), "alpha");
  EXPECT_EQ(reader.Extract(reader.entries()[1]), std::string(10000, 'b'));
}

}  // namespace
}  // namespace adreplay::warc
