#ifndef ADREPLAY_REPLAY_REPLAY_SERVICE_H_
#define ADREPLAY_REPLAY_REPLAY_SERVICE_H_

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/replay/collection.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::replay {

struct HttpRequest {
  std::string method = "GET";
  std::string target;  // raw request target, path and query
  warc::HeaderList headers;
};

struct HttpResponse {
  int status = 200;
  warc::HeaderList headers;
  std::string body;

  std::optional<std::string_view> header(std::string_view name) const {
    return warc::FindHeader(headers, name);
  }
};

struct ServerConfig {
  std::string listen = "127.0.0.1:8080";
  std::string replay_base = "/web/";
  std::vector<std::filesystem::path> warcs;
  std::vector<std::filesystem::path> waczs;
  std::optional<std::filesystem::path> rules_path;
  std::optional<std::filesystem::path> shim_asset;
  std::string shim_src = "/_shim/shim.js";
  bool inject_shim = true;
  int verbosity = 0;

  // Throws std::invalid_argument when replay_base is empty or lacks the
  // trailing '/'.
  void Validate() const;
};

// Request handling, independent of any socket layer. Never opens network
// connections. Handle() may be called from many threads; Reload() swaps the
// collection atomically and in-flight requests finish on the old snapshot.
class ReplayService {
 public:
  ReplayService(ServerConfig config, std::shared_ptr<const Collection> collection);

  HttpResponse Handle(const HttpRequest& request) const;

  void Reload(std::shared_ptr<const Collection> collection);
  std::shared_ptr<const Collection> snapshot() const;
  const ServerConfig& config() const { return config_; }

 private:
  HttpResponse ServeMemento(const Collection& collection, const HttpRequest& request) const;
  HttpResponse ServeSearch(const Collection& collection, std::string_view query) const;
  HttpResponse ServeHealth(const Collection& collection) const;
  HttpResponse ServeShim() const;

  ServerConfig config_;
  std::optional<std::string> shim_body_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Collection> collection_;
};

// The URI-R a Referer header points at, when it is a URI-M under
// `replay_base` (absolute or path-only) or a plain http(s) URL.
std::optional<std::string> RefererToUrir(std::string_view referer, std::string_view replay_base);

}  // namespace adreplay::replay

#endif  // ADREPLAY_REPLAY_REPLAY_SERVICE_H_
