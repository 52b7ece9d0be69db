#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bltrend::http {

struct Request {
    std::string method = "GET";
    std::string url;  // scheme://host[:port]/path[?query]
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type = "application/json";
    std::chrono::milliseconds timeout{30000};
};

struct Response {
    int status = 0;
    std::string body;
};

/// Performs one request. Connection-level failures throw TransportError;
/// HTTP error statuses are returned to the caller.
Response send(const Request& request);

/// Percent-encodes everything except unreserved characters and `keep`.
std::string url_encode(std::string_view text, std::string_view keep = {});

/// Joins a base URL and a path without doubling or dropping the slash.
std::string join_url(std::string_view base, std::string_view path);

}  // namespace bltrend::http
