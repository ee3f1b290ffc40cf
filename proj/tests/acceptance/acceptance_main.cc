// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.
//
// connect() and getaddrinfo() are interposed for the whole process so every
// socket the replay stack opens is recorded. Non-loopback connections are
// recorded and refused rather than forwarded.

#include <arpa/inet.h>
#include <dlfcn.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adreplay/adscan/spn_blocklist.h"
#include "adreplay/cdx/capture_index.h"
#include "adreplay/replay/collection.h"
#include "adreplay/replay/http_server.h"
#include "adreplay/replay/miss_report.h"
#include "adreplay/replay/replay_service.h"
#include "adreplay/rewrite/urim.h"
#include "adreplay/rewrite/wombat.h"
#include "adreplay/util/timestamp.h"
#include "adreplay/warc/warc_reader.h"
#include "adreplay/warc/warc_writer.h"
#include "testing/ad_urls.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"
#include "testing/raw_http.h"

namespace {

struct Connection {
  std::string address;
  int port = 0;
  bool loopback = false;
};

std::mutex g_net_mutex;
std::vector<Connection> g_connections;
std::vector<std::string> g_lookups;

Connection Describe(const sockaddr* addr) {
  Connection c;
  char text[INET6_ADDRSTRLEN] = {};
  if (addr->sa_family == AF_INET) {
    const auto* in = reinterpret_cast<const sockaddr_in*>(addr);
    inet_ntop(AF_INET, &in->sin_addr, text, sizeof text);
    c.port = ntohs(in->sin_port);
    c.loopback = (ntohl(in->sin_addr.s_addr) >> 24) == 127;
  } else if (addr->sa_family == AF_INET6) {
    const auto* in6 = reinterpret_cast<const sockaddr_in6*>(addr);
    inet_ntop(AF_INET6, &in6->sin6_addr, text, sizeof text);
    c.port = ntohs(in6->sin6_port);
    c.loopback = IN6_IS_ADDR_LOOPBACK(&in6->sin6_addr);
  } else if (addr->sa_family == AF_UNIX) {
    std::strcpy(text, "unix");
    c.loopback = true;
  } else {
    std::strcpy(text, "other");
  }
  c.address = text;
  return c;
}

void ResetNetworkLog() {
  std::lock_guard lock(g_net_mutex);
  g_connections.clear();
  g_lookups.clear();
}

}  // namespace

extern "C" int connect(int fd, const struct sockaddr* addr, socklen_t len) {
  using ConnectFn = int (*)(int, const struct sockaddr*, socklen_t);
  static const auto real = reinterpret_cast<ConnectFn>(dlsym(RTLD_NEXT, "connect"));
  const Connection c = Describe(addr);
  {
    std::lock_guard lock(g_net_mutex);
    g_connections.push_back(c);
  }
  if (!c.loopback) {
    errno = ECONNREFUSED;
    return -1;
  }
  return real(fd, addr, len);
}

extern "C" int getaddrinfo(const char* node, const char* service, const struct addrinfo* hints,
                           struct addrinfo** res) {
  using GetaddrinfoFn =
      int (*)(const char*, const char*, const struct addrinfo*, struct addrinfo**);
  static const auto real = reinterpret_cast<GetaddrinfoFn>(dlsym(RTLD_NEXT, "getaddrinfo"));
  const std::string name = node ? node : "";
  {
    std::lock_guard lock(g_net_mutex);
    g_lookups.push_back(name);
  }
  if (!name.empty() && name != "localhost" && name.rfind("127.", 0) != 0 && name != "::1") {
    return EAI_NONAME;
  }
  return real(node, service, hints, res);
}

namespace {

using adreplay::Timestamp14;
using adreplay::testing::MakeResponse;
using adreplay::testing::RawGet;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// A replay server over `records` on an ephemeral loopback port.
class LiveReplay {
 public:
  explicit LiveReplay(const std::vector<adreplay::warc::CaptureRecord>& records) {
    auto source = adreplay::warc::WriteWarc(records, dir_ / "crawl.warc.gz", true);
    service_ = std::make_unique<adreplay::replay::ReplayService>(
        adreplay::replay::ServerConfig{},
        adreplay::replay::BuildCollection({std::move(source)}));
    server_ = std::make_unique<adreplay::replay::HttpServer>(*service_);
    port_ = server_->Bind("127.0.0.1", 0);
    server_->Start();
  }
  ~LiveReplay() { server_->Stop(); }

  int port() const { return port_; }

 private:
  adreplay::testing::TempDir dir_;
  std::unique_ptr<adreplay::replay::ReplayService> service_;
  std::unique_ptr<adreplay::replay::HttpServer> server_;
  int port_ = 0;
};

Outcome SafeframeResolution() {
  const std::string ts = "20230822161546";
  LiveReplay replay({MakeResponse(std::string(adreplay::testing::kSafeframeUrl), ts, "text/html",
                                  "<html><body>safeframe capture</body></html>")});
  const auto start = std::chrono::steady_clock::now();
  int resolved = 0;
  std::string failures;
  for (std::string_view label : adreplay::testing::kReplaySafeframeLabels) {
    const auto r = RawGet(replay.port(), "/web/" + ts + "if_/" +
                                             adreplay::testing::SafeframeUrlWithLabel(label));
    if (r.status == 200 && r.header("X-Archive-Rule") == "safeframe" &&
        r.body.find("safeframe capture") != std::string::npos) {
      ++resolved;
    } else {
      failures += " " + std::string(label) + "=" + std::to_string(r.status);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << resolved << "/10 resolved via safeframe in " << seconds << " s" << failures;
  return {resolved == 10 && seconds < 1.0, detail.str()};
}

Outcome AmazonRndResolution() {
  const std::string ts = "20230822161546";
  const std::string other_rnd = "1111111111111111111111111";
  bool single_ok = false;
  {
    LiveReplay replay({MakeResponse(std::string(adreplay::testing::kAmazonAdmiUrl), ts,
                                    "text/html", "<html>admi</html>")});
    const auto r = RawGet(replay.port(), "/web/" + ts + "if_/" +
                                             adreplay::testing::AmazonAdmiUrlWithRnd(other_rnd));
    single_ok = r.status == 200 && r.header("X-Archive-Rule") == "amazon_rnd";
  }

  LiveReplay replay({MakeResponse(adreplay::testing::AmazonAdmiUrlWithRnd("2222"), ts, "text/html",
                                  "<html>first</html>"),
                     MakeResponse(adreplay::testing::AmazonAdmiUrlWithRnd("3333"), ts, "text/html",
                                  "<html>second</html>")});
  std::set<std::string> bodies;
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto r = RawGet(replay.port(), "/web/" + ts + "if_/" +
                                             adreplay::testing::AmazonAdmiUrlWithRnd(other_rnd));
    if (r.status == 200 && r.header("X-Archive-Rule") == "amazon_rnd") ++ok;
    bodies.insert(r.body);
  }
  std::ostringstream detail;
  detail << "different rnd " << (single_ok ? "200 via amazon_rnd" : "not resolved") << "; " << ok
         << "/100 repeated misses resolved, " << bodies.size() << " distinct pick(s)";
  return {single_ok && ok == 100 && bodies.size() == 1, detail.str()};
}

Outcome RichloadResolution() {
  const std::string ts = "20230207120000";
  LiveReplay replay({MakeResponse(std::string(adreplay::testing::kRichloadCapture), ts,
                                  "text/html", "<html>richload capture</html>"),
                     MakeResponse(std::string(adreplay::testing::kRichloadReferrer), ts,
                                  "text/html", "<html>ad frame</html>")});
  const std::string referer = "http://127.0.0.1:" + std::to_string(replay.port()) + "/web/" + ts +
                              "if_/" + std::string(adreplay::testing::kRichloadReferrer);
  const auto r = RawGet(replay.port(),
                        "/web/" + ts + "if_/" + std::string(adreplay::testing::kRichloadRequest),
                        {{"Referer", referer}});
  const bool pass = r.status == 200 && r.header("X-Archive-Rule") == "richload" &&
                    r.body.find("richload capture") != std::string::npos;
  return {pass, "status " + std::to_string(r.status) + " rule " +
                    r.header("X-Archive-Rule").value_or("none")};
}

Outcome SpnBlocklistVerdicts() {
  struct Case {
    const char* url;
    bool blocked;
  };
  const Case cases[] = {
      {"https://treid003.github.io/imgAd.jpg", true},
      {"https://treid003.github.io/displayAds.js", true},
      {"https://treid003.github.io/videoAd.mp4", true},
      {"https://treid003.github.io/webAd.png", true},
      {"https://savingads.github.io/no_extension/imgAd", false},
      {"https://treid003.github.io/Advertisement_files/Block_Ads_By_Regular_Expression.html", true},
      {"https://treid003.github.io/files/Block_Ads_By_Regular_Expression.html", false},
      {"https://twitter.com/displayads/status/128664060186214400", true},
  };
  const auto list = adreplay::adscan::SpnBlocklist::Default();
  int exact = 0;
  std::string wrong;
  for (const Case& c : cases) {
    if (list.Check(c.url).blocked == c.blocked) {
      ++exact;
    } else {
      wrong += std::string(" ") + c.url;
    }
  }
  return {exact == 8, std::to_string(exact) + "/8 verdicts exact" + wrong};
}

Outcome LcgDeterminism() {
  constexpr std::uint64_t kSeed = 1692720944;
  adreplay::rewrite::SeededRandom a(kSeed), b(kSeed);
  bool identical = true, in_range = true;
  std::uint32_t first_state = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t sa = a.NextState(), sb = b.NextState();
    if (i == 0) first_state = sa;
    identical = identical && sa == sb;
    const double d = static_cast<double>(sa) / adreplay::rewrite::kLcgModulus;
    in_range = in_range && d >= 0.0 && d < 1.0;
  }
  const std::uint32_t oracle = adreplay::testing::LcgStateAfter(kSeed, 1);
  const auto golden = adreplay::rewrite::GoldenVectors(kSeed, 1000);
  const bool first_ok = first_state == oracle && oracle == 100161 &&
                        golden.front() == adreplay::testing::ExactDrawDecimal(oracle);
  std::ostringstream detail;
  detail << "runs " << (identical ? "identical" : "differ") << "; first draw " << first_state
         << "/233280 = " << golden.front() << " (oracle " << oracle << "); "
         << (in_range ? "all in [0,1)" : "out of range");
  return {identical && first_ok && in_range, detail.str()};
}

Outcome OracleEquivalence() {
  using adreplay::cdx::CdxEntry;
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int64_t> when(1'600'000'000, 1'700'000'000);
  std::uniform_int_distribution<int> key(0, 4), status(0, 9);

  std::vector<CdxEntry> entries;
  for (int i = 0; i < 50; ++i) {
    CdxEntry e;
    e.key = "k" + std::to_string(key(rng)) + ".test/";
    e.timestamp = Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(when(rng))));
    e.original_uri = "https://" + e.key;
    e.mime = "text/html";
    e.status = status(rng) == 0 ? 500 : 200;
    e.source_id = "s";
    e.offset = static_cast<std::uint64_t>(i) * 100;
    e.length = 100;
    entries.push_back(e);
  }
  const adreplay::cdx::CaptureIndex index(entries);
  int lookups_ok = 0;
  for (int q = 0; q < 200; ++q) {
    const auto ts = Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(when(rng))));
    const std::string k = "k" + std::to_string(key(rng)) + ".test/";
    const CdxEntry* expected = adreplay::testing::BruteForceNearest(index.entries(), k, ts);
    const CdxEntry* got = adreplay::cdx::NearestCapture(index.EntriesForKey(k), ts);
    if ((expected == nullptr) == (got == nullptr) && (!expected || *expected == *got)) {
      ++lookups_ok;
    }
  }

  adreplay::testing::TempDir dir;
  std::mt19937_64 rng64(8);
  const auto records = adreplay::testing::RandomRecords(rng64, 100);
  const auto source = adreplay::warc::WriteWarc(records, dir / "r.warc.gz", true);
  const auto parsed = adreplay::warc::ParseWarc(source);
  int records_ok = 0;
  for (size_t i = 0; i < records.size() && i < parsed.size(); ++i) {
    if (parsed[i].record == records[i]) ++records_ok;
  }
  if (parsed.size() != records.size()) records_ok = 0;

  using adreplay::rewrite::Modifier;
  const Modifier mods[] = {Modifier::kNone, Modifier::kJs, Modifier::kCs, Modifier::kIm,
                           Modifier::kIf,   Modifier::kId, Modifier::kOe};
  std::uniform_int_distribution<std::int64_t> any_time(0, 4'102'444'799);
  std::uniform_int_distribution<int> pick(0, 6), len(0, 16), ch(0, 61);
  const std::string alnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  int urims_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string ts =
        Timestamp14::FromTime(std::chrono::sys_seconds(std::chrono::seconds(any_time(rng)))).text();
    std::string urir = (i % 2 ? "https://" : "http://") + std::string(1, alnum[ch(rng) % 26]) +
                       ".test/";
    for (int k = len(rng); k > 0; --k) urir += alnum[ch(rng)];
    if (i % 3 == 0) urir += "?q=" + std::to_string(i) + "&next=https://x.test/";
    const Modifier m = mods[pick(rng)];
    try {
      const std::string text = adreplay::rewrite::MakeUriM("/web/", urir, ts, m);
      const auto back = adreplay::rewrite::ParseUriM(text, "/web/");
      if (back == adreplay::rewrite::UriM{"/web/", ts, m, urir} && back.ToString() == text) {
        ++urims_ok;
      }
    } catch (const std::exception&) {
    }
  }

  std::ostringstream detail;
  detail << "lookups " << lookups_ok << "/200, WARC records " << records_ok << "/100, URI-Ms "
         << urims_ok << "/100";
  return {lookups_ok == 200 && records_ok == 100 && urims_ok == 100, detail.str()};
}

Outcome Isolation() {
  // The recorder must see a connection attempt before its silence counts.
  ResetNetworkLog();
  {
    sockaddr_in probe{};
    probe.sin_family = AF_INET;
    probe.sin_port = htons(80);
    inet_pton(AF_INET, "192.0.2.1", &probe.sin_addr);
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    const int rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&probe), sizeof probe);
    ::close(fd);
    std::lock_guard lock(g_net_mutex);
    if (rc == 0 || g_connections.size() != 1 || g_connections[0].loopback) {
      return {false, "connection recorder is not active"};
    }
  }
  ResetNetworkLog();

  const std::string ts = "20230822161544";
  const std::string page =
      "<!DOCTYPE html><html><head><script src=\"https://ads.unarchived-one.test/tag.js\">"
      "</script></head><body><h1>news</h1>"
      "<img src=\"https://cdn.unarchived-two.test/banner.png\">"
      "<iframe src=\"https://frames.unarchived-three.test/slot.html\"></iframe>"
      "</body></html>";
  LiveReplay replay({MakeResponse("https://news.test/", ts, "text/html", page)});
  const auto r = RawGet(replay.port(), "/web/" + ts + "/https://news.test/");
  if (r.status != 200) return {false, "page status " + std::to_string(r.status)};

  const std::regex ref("(?:src|href)=\"([^\"]+)\"");
  std::vector<std::string> subresources;
  for (auto it = std::sregex_iterator(r.body.begin(), r.body.end(), ref);
       it != std::sregex_iterator(); ++it) {
    const std::string url = (*it)[1];
    if (url.find("unarchived") != std::string::npos) subresources.push_back(url);
  }
  int misses = 0;
  std::string detail_misses;
  for (const std::string& url : subresources) {
    if (!url.starts_with("/web/")) {
      detail_misses += " live:" + url;
      continue;
    }
    const auto sub = RawGet(replay.port(), url);
    try {
      const auto report = adreplay::replay::MissReport::FromJson(sub.body);
      if (sub.status == 404 && !report.rules_tried.empty() &&
          url.ends_with(report.requested_urir)) {
        ++misses;
      }
    } catch (const std::exception&) {
      detail_misses += " bad-report:" + url;
    }
  }

  int outbound = 0;
  size_t lookups = 0;
  {
    std::lock_guard lock(g_net_mutex);
    for (const Connection& c : g_connections) {
      if (!c.loopback || c.port != replay.port()) ++outbound;
    }
    for (const std::string& name : g_lookups) {
      if (name != "127.0.0.1" && name != "localhost") ++lookups;
    }
  }
  std::ostringstream detail;
  detail << subresources.size() << " unarchived references, " << misses
         << " 404+MissReport, " << outbound << " outbound connection(s), " << lookups
         << " external lookup(s)" << detail_misses;
  return {subresources.size() == 3 && misses == 3 && outbound == 0 && lookups == 0, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"safeframe_resolution", SafeframeResolution},
      {"amazon_rnd_resolution", AmazonRndResolution},
      {"richload_resolution", RichloadResolution},
      {"spn_blocklist_verdicts", SpnBlocklistVerdicts},
      {"lcg_determinism", LcgDeterminism},
      {"oracle_equivalence", OracleEquivalence},
      {"replay_isolation", Isolation},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << ": " << outcome.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
