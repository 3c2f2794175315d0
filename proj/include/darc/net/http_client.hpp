#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darc/net/tcp.hpp"

namespace darc::net {

struct HttpLimits {
    int timeout_ms = 10000;
    std::uint64_t max_body_bytes = 8ull << 20;
    std::uint64_t max_head_bytes = 64ull << 10;
};

struct HttpResponse {
    int status = 0;
    std::string head;  // status line + headers + CRLFCRLF; re-framed to
                       // Content-Length when the wire used chunked encoding
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;

    std::optional<std::string> header(const std::string& name) const;
};

/// Minimal HTTP/1.1 GET over an already-connected stream (typically one that
/// came out of socks5_connect). Sends Connection: close; handles
/// Content-Length, chunked transfer coding, and read-to-EOF framing.
/// Throws Error{timeout | too_large | io_failure | unparseable}.
HttpResponse http_get(TcpStream& stream, const std::string& host_header,
                      const std::string& path_and_query, const HttpLimits& limits,
                      const std::string& user_agent, std::string* request_head_out = nullptr);

}  // namespace darc::net
