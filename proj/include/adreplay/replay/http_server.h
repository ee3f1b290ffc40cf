#ifndef ADREPLAY_REPLAY_HTTP_SERVER_H_
#define ADREPLAY_REPLAY_HTTP_SERVER_H_

#include <memory>
#include <string>
#include <thread>

#include "adreplay/replay/replay_service.h"

namespace adreplay::replay {

// Socket front end for a ReplayService. Request targets are passed through
// raw so URI-Rs embedded in URI-Ms keep their exact bytes.
class HttpServer {
 public:
  explicit HttpServer(const ReplayService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws
  // std::runtime_error when binding fails.
  int Bind(const std::string& host, int port);

  // Serves until Stop(); blocks.
  void Run();

  // Serves on a background thread.
  void Start();
  void Stop();

  int port() const { return port_; }

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

// "host:port" or ":port" or "port".
std::pair<std::string, int> ParseListenAddress(const std::string& address);

}  // namespace adreplay::replay

#endif  // ADREPLAY_REPLAY_HTTP_SERVER_H_
