#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "adreplay/adscan/scan_report.h"
#include "adreplay/adscan/spn_blocklist.h"
#include "adreplay/warc/warc_writer.h"
#include "json.hpp"
#include "testing/fixtures.h"

namespace adreplay {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string Quote(const std::string& arg) {
  std::string q = "'";
  for (char c : arg) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

// Runs `binary args...` with stdout captured and stderr discarded.
RunResult RunBinary(const std::string& binary, const std::vector<std::string>& args) {
  std::string command = Quote(binary);
  for (const auto& a : args) command += " " + Quote(a);
  command += " 2>/dev/null";
  RunResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

RunResult AdScan(const std::vector<std::string>& args) { return RunBinary(AD_SCAN_BINARY, args); }

class AdScanCliTest : public ::testing::Test {
 protected:
  testing::TempDir dir_;
};

TEST_F(AdScanCliTest, GalleryFromGzipWarc) {
  const auto fixture = testing::MakeGalleryFixture();
  const auto warc = dir_ / "data.warc.gz";
  warc::WriteWarc(fixture.records, warc, true);
  const auto out = dir_ / "gallery";
  const RunResult r = AdScan({"gallery", warc.string(), fixture.seed_url, "--out", out.string()});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("3 candidate(s)"), std::string::npos);
  const auto manifest = nlohmann::json::parse(testing::ReadFile(out / "manifest.json"));
  EXPECT_EQ(manifest["count"], fixture.expected_urls.size());
  EXPECT_EQ(manifest["seed_url"], fixture.seed_url);
  EXPECT_TRUE(std::filesystem::exists(out / "index.html"));
  const std::string index = testing::ReadFile(out / "index.html");
  for (const auto& url : fixture.expected_urls) EXPECT_NE(index.find(url), std::string::npos) << url;
  EXPECT_EQ(index.find(fixture.seed_url + "\""), std::string::npos);
}

TEST_F(AdScanCliTest, GalleryArgumentErrors) {
  const auto fixture = testing::MakeGalleryFixture();
  const auto warc = dir_ / "data.warc.gz";
  warc::WriteWarc(fixture.records, warc, true);
  EXPECT_EQ(AdScan({"gallery", warc.string(), "/relative/seed"}).exit_code, 2);
  EXPECT_EQ(AdScan({"gallery", warc.string(), fixture.seed_url, "--replay-base", "/web"}).exit_code,
            2);
  EXPECT_EQ(AdScan({"gallery", warc.string()}).exit_code, 2);
  EXPECT_EQ(AdScan({}).exit_code, 2);
  EXPECT_EQ(AdScan({"unknown-command"}).exit_code, 2);
}

TEST_F(AdScanCliTest, ParseFailureExitCode) {
  const auto junk = dir_ / "junk.warc";
  testing::WriteFile(junk, "this is not a web archive\r\n");
  EXPECT_EQ(AdScan({"report", junk.string()}).exit_code, 1);
  EXPECT_EQ(AdScan({"report", (dir_ / "missing.warc").string()}).exit_code, 1);
  EXPECT_EQ(AdScan({"gallery", junk.string(), "https://h.test/"}).exit_code, 1);
}

TEST_F(AdScanCliTest, ReportMatchesLibrary) {
  const auto fixture = testing::MakeStandardFixture();
  const auto warc = dir_ / "data.warc.gz";
  warc::WriteWarc(fixture.records, warc, true);
  const auto expected = adscan::ScanArchive(warc, adscan::SpnBlocklist::Default());

  const RunResult json = AdScan({"report", warc.string(), "--format", "json"});
  ASSERT_EQ(json.exit_code, 0);
  EXPECT_EQ(adscan::ScanReport::FromJson(json.out), expected);

  const RunResult text = AdScan({"report", warc.string()});
  ASSERT_EQ(text.exit_code, 0);
  EXPECT_EQ(text.out, expected.ToText());

  EXPECT_EQ(AdScan({"report", warc.string(), "--format", "xml"}).exit_code, 2);
  EXPECT_EQ(AdScan({"report", warc.string(), "--blocklist", (dir_ / "none.conf").string()})
                .exit_code,
            2);
}

TEST_F(AdScanCliTest, SpnCheck) {
  const RunResult r = AdScan({"spn-check", "https://h.test/img/imgAd.gif", "https://h.test/logo.png",
                              "--format", "json"});
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = nlohmann::json::parse(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0]["blocked"]);
  EXPECT_EQ(rows[0]["matched_token"], "imgAd");
  EXPECT_FALSE(rows[1]["blocked"]);

  const RunResult text = AdScan({"spn-check", "https://h.test/displayAds/x.js"});
  ASSERT_EQ(text.exit_code, 0);
  EXPECT_TRUE(text.out.starts_with("BLOCKED\t"));

  const auto conf = dir_ / "block.conf";
  testing::WriteFile(conf, "file imgAd\n");
  const RunResult custom =
      AdScan({"spn-check", "https://h.test/displayAds/x.js", "--blocklist", conf.string()});
  ASSERT_EQ(custom.exit_code, 0);
  EXPECT_TRUE(custom.out.starts_with("allowed\t"));

  EXPECT_EQ(AdScan({"spn-check", "ftp://h.test/imgAd.gif"}).exit_code, 2);
  EXPECT_EQ(AdScan({"spn-check"}).exit_code, 2);
}

TEST(LcgVectorsCliTest, MatchesCommittedGoldenFile) {
  const std::string golden =
      testing::ReadFile(ADREPLAY_FIXTURE_DIR "/lcg_golden_1692720944_1000.txt");
  const RunResult r = RunBinary(LCG_VECTORS_BINARY, {"1692720944", "1000"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, golden);

  testing::TempDir dir;
  ASSERT_EQ(RunBinary(LCG_VECTORS_BINARY, {"1692720944", "1000", "--out", (dir / "v.txt").string()})
                .exit_code,
            0);
  EXPECT_EQ(testing::ReadFile(dir / "v.txt"), golden);
  EXPECT_EQ(RunBinary(LCG_VECTORS_BINARY, {"not-a-number", "3"}).exit_code, 2);
}

}  // namespace
}  // namespace adreplay
