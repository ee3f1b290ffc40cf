#include "adreplay/replay/http_server.h"

#include <stdexcept>

#include "adreplay/util/strings.h"
#include "httplib.h"

namespace adreplay::replay {

class HttpServer::Impl {
 public:
  explicit Impl(const ReplayService& service) : service_(service) {
    const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      Dispatch(req, res);
    };
    server_.Get(".*", handler);
    server_.Post(".*", handler);
    server_.Put(".*", handler);
    server_.Delete(".*", handler);
    server_.Patch(".*", handler);
    server_.Options(".*", handler);
  }

  httplib::Server& server() { return server_; }

 private:
  void Dispatch(const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.target = req.target;
    for (const auto& [name, value] : req.headers) request.headers.emplace_back(name, value);
    const HttpResponse response = service_.Handle(request);
    res.status = response.status;
    std::string content_type = "application/octet-stream";
    for (const auto& [name, value] : response.headers) {
      if (EqualsIgnoreCase(name, "Content-Type")) {
        content_type = value;
      } else {
        res.set_header(name, value);
      }
    }
    res.set_content(response.body, content_type);
  }

  const ReplayService& service_;
  httplib::Server server_;
};

HttpServer::HttpServer(const ReplayService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  auto& server = impl_->server();
  if (port == 0) {
    port_ = server.bind_to_any_port(host);
  } else if (server.bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
  return port_;
}

void HttpServer::Run() { impl_->server().listen_after_bind(); }

void HttpServer::Start() {
  thread_ = std::thread([this] { Run(); });
  impl_->server().wait_until_ready();
}

void HttpServer::Stop() {
  impl_->server().stop();
  if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> ParseListenAddress(const std::string& address) {
  std::string host = "127.0.0.1";
  std::string port_text = address;
  const size_t colon = address.rfind(':');
  if (colon != std::string::npos) {
    if (colon > 0) host = address.substr(0, colon);
    port_text = address.substr(colon + 1);
  }
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  if (port_text.empty() || !IsAllDigits(port_text) || port_text.size() > 5 ||
      std::stoi(port_text) > 65535) {
    throw std::invalid_argument("bad listen address '" + address + "'");
  }
  return {host, std::stoi(port_text)};
}

}  // namespace adreplay::replay
