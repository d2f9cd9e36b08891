#include "scholarscope/http_client.hpp"

#include <stdexcept>

#include <fmt/format.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace scholarscope::net {

nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         std::chrono::milliseconds timeout, const std::string& bearer_token) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::runtime_error(fmt::format("not an absolute URL: {}", url));
  auto path_start = url.find('/', scheme_end + 3);
  std::string base = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(base);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw std::runtime_error(fmt::format("request to {} failed: {}", url, httplib::to_string(res.error())));
  if (res->status < 200 || res->status >= 300)
    throw std::runtime_error(fmt::format("request to {} returned HTTP {}", url, res->status));
  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) throw std::runtime_error(fmt::format("reply from {} is not JSON", url));
  return parsed;
}

}  // namespace scholarscope::net
