#ifndef ADREPLAY_TESTS_TESTING_RAW_HTTP_H_
#define ADREPLAY_TESTS_TESTING_RAW_HTTP_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adreplay::testing {

struct RawResponse {
  int status = 0;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  std::optional<std::string> header(std::string_view name) const;
};

// Sends one HTTP/1.1 request to 127.0.0.1:`port` with the target written
// byte for byte, then reads until the server closes. Throws
// std::runtime_error on socket errors or an unparseable response.
RawResponse RawRequest(int port, std::string_view method, std::string_view target,
                       const std::vector<std::pair<std::string, std::string>>& headers = {});

inline RawResponse RawGet(int port, std::string_view target,
                          const std::vector<std::pair<std::string, std::string>>& headers = {}) {
  return RawRequest(port, "GET", target, headers);
}

}  // namespace adreplay::testing

#endif  // ADREPLAY_TESTS_TESTING_RAW_HTTP_H_
