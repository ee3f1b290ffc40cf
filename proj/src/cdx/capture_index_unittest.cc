#include "adreplay/cdx/capture_index.h"

#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "adreplay/cdx/canonical_url.h"
#include "adreplay/cdx/cdxj.h"
#include "adreplay/warc/warc_writer.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace adreplay::cdx {
namespace {

using testing::MakeResponse;
using testing::TempDir;

Timestamp14 Ts(std::string_view text) { return *Timestamp14::Parse(text); }

CdxEntry Entry(std::string key, std::string_view ts, int status = 200, std::string digest = "") {
  CdxEntry e;
  e.key = std::move(key);
  e.timestamp = Ts(ts);
  e.original_uri = "https://" + e.key;
  e.status = status;
  e.mime = "text/html";
  e.digest = digest.empty() ? "sha1:" + std::string(ts) : digest;
  return e;
}

TEST(BuildIndexTest, EmptySources) {
  EXPECT_TRUE(BuildIndex({}).index.empty());
}

TEST(BuildIndexTest, StandardFixtureCountsResponses) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  EXPECT_EQ(fixture.response_count, 7u);
  EXPECT_EQ(fixture.request_count, 2u);
  const CaptureIndex index = testing::IndexOf(fixture.records, dir.path());
  EXPECT_EQ(index.size(), fixture.response_count);
  EXPECT_TRUE(std::is_sorted(index.entries().begin(), index.entries().end(), EntryLess));
}

TEST(BuildIndexTest, TwoCapturesShareKeyInTimeOrder) {
  TempDir dir;
  const std::vector<warc::CaptureRecord> records = {
      MakeResponse("https://h.test/x", "20230105000000", "text/plain", "late"),
      MakeResponse("https://www.h.test/x", "20230101000000", "text/plain", "early")};
  const CaptureIndex index = testing::IndexOf(records, dir.path());
  ASSERT_EQ(index.size(), 2u);
  EXPECT_EQ(index.entries()[0].key, "h.test/x");
  EXPECT_EQ(index.entries()[1].key, "h.test/x");
  EXPECT_EQ(index.entries()[0].timestamp.text(), "20230101000000");
  EXPECT_EQ(index.entries()[1].timestamp.text(), "20230105000000");
}

TEST(BuildIndexTest, DeterministicUnderSourceOrder) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::vector<warc::ArchiveSource> sources;
  for (int i = 0; i < 3; ++i) {
    sources.push_back(
        warc::WriteWarc(testing::RandomRecords(rng, 40), dir / ("s" + std::to_string(i)), i == 2));
  }
  const auto forward = BuildIndex(sources).index;
  std::reverse(sources.begin(), sources.end());
  const auto backward = BuildIndex(sources).index;
  ASSERT_EQ(forward.size(), backward.size());
  EXPECT_TRUE(std::equal(forward.entries().begin(), forward.entries().end(),
                         backward.entries().begin()));
}

TEST(BuildIndexTest, RevisitsTakeOriginalLocation) {
  TempDir dir;
  const auto original = MakeResponse("https://h.test/a", "20230101000000", "text/html", "same");
  const std::vector<warc::CaptureRecord> records = {
      original, testing::MakeRevisit("https://h.test/a", "20230201000000", original.payload_digest),
      testing::MakeRevisit("https://h.test/b", "20230201000000", "sha1:UNKNOWNDIGEST")};
  const CaptureIndex index = testing::IndexOf(records, dir.path());
  ASSERT_EQ(index.size(), 3u);
  const auto a = index.EntriesForKey("h.test/a");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_FALSE(a[0].revisit);
  EXPECT_TRUE(a[1].revisit);
  EXPECT_FALSE(a[1].unresolved_revisit);
  EXPECT_EQ(a[1].offset, a[0].offset);
  EXPECT_EQ(a[1].length, a[0].length);
  const auto b = index.EntriesForKey("h.test/b");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(b[0].unresolved_revisit);
  EXPECT_FALSE(b[0].preferred());
}

TEST(BuildIndexTest, FailedSourceIsReported) {
  TempDir dir;
  const std::vector<warc::CaptureRecord> records = {
      MakeResponse("https://h.test/a", "20230101000000", "text/plain", "a")};
  const auto good = warc::WriteWarc(records, dir / "good.warc", false);
  testing::WriteFile(dir / "bad.warc", "NOT A WARC\r\n\r\n");
  const auto bad = warc::OpenWarcFile(dir / "bad.warc");
  const std::vector<warc::ArchiveSource> sources = {good, bad};
  const BuildResult result = BuildIndex(sources);
  EXPECT_EQ(result.index.size(), 1u);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].source_id, bad.id);
}

TEST(CaptureIndexTest, DropsDuplicateTriples) {
  const CaptureIndex index({Entry("a/", "20230101000000"), Entry("a/", "20230101000000")});
  EXPECT_EQ(index.size(), 1u);
}

TEST(LookupTest, SoleCandidate) {
  const CaptureIndex index({Entry("h.test/", "20230101000000")});
  EXPECT_EQ(Lookup(index, "https://h.test/", Ts("20231231235959")).timestamp.text(),
            "20230101000000");
}

TEST(LookupTest, TieGoesEarlier) {
  const CaptureIndex index({Entry("h.test/", "20230103000000"), Entry("h.test/", "20230101000000")});
  EXPECT_EQ(Lookup(index, "https://h.test/", Ts("20230102000000")).timestamp.text(),
            "20230101000000");
}

TEST(LookupTest, ServerErrorsOnlyAsLastResort) {
  const CaptureIndex index({Entry("h.test/", "20230102000000", 503),
                            Entry("h.test/", "20230110000000", 200)});
  EXPECT_EQ(Lookup(index, "https://h.test/", Ts("20230102000000")).status, 200);
  const CaptureIndex only_errors({Entry("h.test/", "20230102000000", 503)});
  EXPECT_EQ(Lookup(only_errors, "https://h.test/", Ts("20230110000000")).status, 503);
}

TEST(LookupTest, Misses) {
  const CaptureIndex index({Entry("h.test/", "20230101000000")});
  try {
    Lookup(index, "https://other.test/", Ts("20230101000000"));
    FAIL();
  } catch (const CdxError& e) {
    EXPECT_EQ(e.kind(), CdxError::Kind::kNotFound);
  }
  try {
    Lookup(index, "mailto:x@y", Ts("20230101000000"));
    FAIL();
  } catch (const CdxError& e) {
    EXPECT_EQ(e.kind(), CdxError::Kind::kNotAbsoluteUrl);
  }
}

TEST(LookupTest, MatchesBruteForce) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::int64_t> when(1'600'000'000, 1'700'000'000);
  std::uniform_int_distribution<int> key(0, 4), status(0, 9);
  for (int round = 0; round < 5; ++round) {
    std::vector<CdxEntry> entries;
    for (int i = 0; i < 50; ++i) {
      const auto ts = Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(when(rng))));
      entries.push_back(Entry("k" + std::to_string(key(rng)) + ".test/", ts.text(),
                              status(rng) == 0 ? 500 : 200));
    }
    const CaptureIndex index(entries);
    for (int q = 0; q < 200; ++q) {
      const auto ts = Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(when(rng))));
      const std::string k = "k" + std::to_string(key(rng)) + ".test/";
      const CdxEntry* expected = testing::BruteForceNearest(index.entries(), k, ts);
      const CdxEntry* got = NearestCapture(index.EntriesForKey(k), ts);
      ASSERT_EQ(expected == nullptr, got == nullptr);
      if (expected) EXPECT_EQ(*got, *expected);
    }
  }
}

TEST(PrefixSearchTest, FindsEmbeddedAdPage) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  const CaptureIndex index = testing::IndexOf(fixture.records, dir.path());
  const auto rows = PrefixSearch(index, "https://s0.2mdn.net/");
  const bool found = std::any_of(rows.begin(), rows.end(), [&](const CdxEntry& e) {
    return e.original_uri == fixture.ad_page_url;
  });
  EXPECT_TRUE(found);
  EXPECT_TRUE(PrefixSearch(index, "https://nothing.test/").empty());

  const auto html = PrefixSearch(index, "https://s0.2mdn.net/", "text/html");
  ASSERT_EQ(html.size(), 1u);
  EXPECT_EQ(html[0].original_uri, fixture.ad_page_url);
}

TEST(PrefixSearchTest, MimeFilterSelectsJpegs) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  const CaptureIndex index = testing::IndexOf(fixture.records, dir.path());
  std::vector<std::string> got;
  for (const auto& row : PrefixSearch(index, "", "image/jpeg")) got.push_back(row.original_uri);
  std::vector<std::string> expected = fixture.jpeg_urls;
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(got, expected);
}

TEST(PrefixSearchTest, LongerPrefixGivesSubset) {
  TempDir dir;
  const auto fixture = testing::MakeStandardFixture();
  const CaptureIndex index = testing::IndexOf(fixture.records, dir.path());
  for (const std::string prefix : {"https://h.test", "https://s0.2mdn.net", "https://tpc."}) {
    const auto wide = PrefixSearch(index, prefix);
    for (const std::string suffix : {"/", "/a", "/sadbundle/", "x"}) {
      for (const auto& e : PrefixSearch(index, prefix + suffix)) {
        EXPECT_NE(std::find(wide.begin(), wide.end(), e), wide.end()) << prefix << suffix;
      }
    }
  }
}

TEST(CdxjTest, RoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(8);
  const auto source = warc::WriteWarc(testing::RandomRecords(rng, 60), dir / "r.warc", true);
  const CaptureIndex index = BuildIndex(std::span(&source, 1)).index;
  std::stringstream text;
  SaveCdxj(index, text);
  const CaptureIndex loaded = LoadCdxj(text);
  ASSERT_EQ(loaded.size(), index.size());
  EXPECT_TRUE(std::equal(loaded.entries().begin(), loaded.entries().end(), index.entries().begin()));

  std::istringstream bad("h.test/ 20230101000000 {not json\n");
  try {
    LoadCdxj(bad);
    FAIL();
  } catch (const CdxError& e) {
    EXPECT_EQ(e.kind(), CdxError::Kind::kBadCdxj);
  }
}

}  // namespace
}  // namespace adreplay::cdx
