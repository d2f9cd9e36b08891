#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace scholarscope::net {

// POSTs `body` as JSON to an http:// or https:// URL and parses the JSON reply.
// Optional bearer token. Throws std::runtime_error on transport failure,
// non-2xx status or an unparsable body.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         std::chrono::milliseconds timeout, const std::string& bearer_token = {});

}  // namespace scholarscope::net
