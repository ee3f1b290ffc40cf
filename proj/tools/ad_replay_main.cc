// ad-replay: serve archived pages and ads from WARC/WACZ files.
//
//   ad-replay --warc a.warc.gz [--warc b.warc] [--wacz c.wacz]
//             [--listen 127.0.0.1:8080] [--rules rules.conf] [--no-shim]
//             [--shim-asset shim.js] [--replay-base /web/] [--write-cdxj out.cdxj]
//
// SIGHUP re-reads the archives and swaps the collection in place.

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "adreplay/cdx/cdxj.h"
#include "adreplay/fuzzy/fuzzy_rule.h"
#include "adreplay/replay/collection.h"
#include "adreplay/replay/http_server.h"
#include "adreplay/replay/replay_service.h"
#include "adreplay/warc/capture_record.h"

namespace {

using adreplay::replay::ServerConfig;

std::shared_ptr<const adreplay::replay::Collection> Load(const ServerConfig& config) {
  std::vector<adreplay::fuzzy::FuzzyRule> rules =
      config.rules_path ? adreplay::fuzzy::LoadRuleFile(*config.rules_path)
                        : adreplay::fuzzy::BuiltinRules();
  auto collection = adreplay::replay::BuildCollection(
      adreplay::replay::OpenSources(config.warcs, config.waczs), std::move(rules));
  for (const auto& failure : collection->failures) {
    std::cerr << "ad-replay: " << failure.source_id << ": " << failure.error << "\n";
  }
  std::cerr << "ad-replay: " << collection->index->size() << " captures from "
            << collection->sources.size() << " source(s)\n";
  return collection;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ad-aware web archive replay"};
  ServerConfig config;
  bool no_shim = false;
  std::string rules, shim_asset, write_cdxj;
  app.add_option("--warc", config.warcs, "WARC file (plain or gzip); repeatable");
  app.add_option("--wacz", config.waczs, "WACZ file; repeatable");
  app.add_option("--listen", config.listen, "host:port to listen on");
  app.add_option("--rules", rules, "Fuzzy rule config file");
  app.add_flag("--no-shim", no_shim, "Do not inject the replay shim into HTML");
  app.add_option("--shim-asset", shim_asset, "Shim script served at the shim path");
  app.add_option("--replay-base", config.replay_base, "Memento path prefix");
  app.add_option("--write-cdxj", write_cdxj, "Also save the index as CDXJ");
  app.add_flag("-v,--verbose", config.verbosity, "Log requests to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  config.inject_shim = !no_shim;
  if (!rules.empty()) config.rules_path = rules;
  if (!shim_asset.empty()) config.shim_asset = shim_asset;

  std::pair<std::string, int> address;
  try {
    config.Validate();
    address = adreplay::replay::ParseListenAddress(config.listen);
  } catch (const std::invalid_argument& e) {
    std::cerr << "ad-replay: " << e.what() << "\n";
    return 2;
  }

  // Signals are taken synchronously by one thread; block them everywhere
  // before any other thread starts.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGHUP);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<adreplay::replay::ReplayService> service;
  try {
    auto collection = Load(config);
    if (!write_cdxj.empty()) {
      std::ofstream out(write_cdxj);
      adreplay::cdx::SaveCdxj(*collection->index, out);
    }
    service = std::make_unique<adreplay::replay::ReplayService>(config, collection);
  } catch (const std::exception& e) {
    std::cerr << "ad-replay: " << e.what() << "\n";
    return 1;
  }

  adreplay::replay::HttpServer server(*service);
  try {
    const int port = server.Bind(address.first, address.second);
    std::cerr << "ad-replay: listening on " << address.first << ":" << port << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ad-replay: " << e.what() << "\n";
    return 1;
  }
  server.Start();

  while (true) {
    int sig = 0;
    if (sigwait(&signals, &sig) != 0) continue;
    if (sig != SIGHUP) break;
    try {
      service->Reload(Load(config));
    } catch (const std::exception& e) {
      std::cerr << "ad-replay: reload failed, keeping the old collection: " << e.what() << "\n";
    }
  }
  server.Stop();
  return 0;
}
