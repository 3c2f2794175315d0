#pragma once

#include <string>

#include "darc/core/timestamp.hpp"
#include "darc/core/uri.hpp"

namespace darc::crawl {

/// One completed HTTP exchange, exactly as it will be archived: verbatim
/// request head, response head (re-framed to Content-Length when the wire
/// used chunked encoding), and the decoded body bytes.
struct FetchResult {
    CanonicalUri uri;            // the target actually fetched
    std::string request_head;    // request line + headers + CRLFCRLF
    int status = 0;
    std::string response_head;   // status line + headers + CRLFCRLF
    std::string body;
    Timestamp14 fetch_started_at;  // set before the first byte goes out
    bool via_proxy = false;

    std::string response_block() const { return response_head + body; }
};

}  // namespace darc::crawl
