#pragma once

#include <cstdint>
#include <string>

#include "darc/net/tcp.hpp"

namespace darc::net {

struct ProxyEndpoint {
    std::string host;
    std::uint16_t port = 0;
};

/// SOCKS5 CONNECT (RFC 1928) with hostname addressing: the destination name
/// goes to the proxy verbatim, which is what keeps onion names away from the
/// local resolver. No authentication methods are offered.
///
/// Throws Error{proxy_unreachable} when the proxy cannot be reached or the
/// handshake is broken, Error{io_failure} when the proxy refuses the
/// destination (reply code included in the message).
TcpStream socks5_connect(const ProxyEndpoint& proxy, const std::string& destination_host,
                         std::uint16_t destination_port, int timeout_ms);

}  // namespace darc::net
