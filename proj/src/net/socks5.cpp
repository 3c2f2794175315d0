#include "darc/net/socks5.hpp"

#include "darc/error.hpp"

namespace darc::net {

namespace {

const char* reply_text(unsigned char code) {
    switch (code) {
        case 0x01: return "general failure";
        case 0x02: return "connection not allowed";
        case 0x03: return "network unreachable";
        case 0x04: return "host unreachable";
        case 0x05: return "connection refused";
        case 0x06: return "TTL expired";
        case 0x07: return "command not supported";
        case 0x08: return "address type not supported";
        default: return "unknown reply";
    }
}

}  // namespace

TcpStream socks5_connect(const ProxyEndpoint& proxy, const std::string& destination_host,
                         std::uint16_t destination_port, int timeout_ms) {
    if (destination_host.size() > 255)
        raise(Errc::unparseable, "hostname too long for SOCKS5: " + destination_host);

    TcpStream stream = TcpStream::connect(proxy.host, proxy.port, timeout_ms);

    // greeting: version 5, one method, no-auth
    stream.write_all(std::string_view("\x05\x01\x00", 3));
    char method[2];
    try {
        stream.read_exact(method, 2, timeout_ms);
    } catch (const Error& e) {
        raise(Errc::proxy_unreachable, std::string("SOCKS5 greeting failed: ") + e.what());
    }
    if (method[0] != 0x05 || method[1] != 0x00)
        raise(Errc::proxy_unreachable, "SOCKS5 proxy rejected no-auth method");

    // CONNECT with ATYP=3 (domain name): the proxy resolves the name.
    std::string request;
    request += '\x05';
    request += '\x01';
    request += '\x00';
    request += '\x03';
    request += static_cast<char>(destination_host.size());
    request += destination_host;
    request += static_cast<char>(destination_port >> 8);
    request += static_cast<char>(destination_port & 0xFF);
    stream.write_all(request);

    char head[4];
    try {
        stream.read_exact(head, 4, timeout_ms);
    } catch (const Error& e) {
        raise(Errc::proxy_unreachable, std::string("SOCKS5 reply truncated: ") + e.what());
    }
    if (head[0] != 0x05) raise(Errc::proxy_unreachable, "not a SOCKS5 reply");
    unsigned char reply = static_cast<unsigned char>(head[1]);

    // consume BND.ADDR/BND.PORT regardless of the reply code
    unsigned char atyp = static_cast<unsigned char>(head[3]);
    std::size_t addr_len = 0;
    if (atyp == 0x01) {
        addr_len = 4;
    } else if (atyp == 0x04) {
        addr_len = 16;
    } else if (atyp == 0x03) {
        char len = 0;
        stream.read_exact(&len, 1, timeout_ms);
        addr_len = static_cast<unsigned char>(len);
    } else {
        raise(Errc::proxy_unreachable, "bad SOCKS5 address type in reply");
    }
    std::string sink(addr_len + 2, '\0');
    stream.read_exact(sink.data(), sink.size(), timeout_ms);

    if (reply != 0x00)
        raise(Errc::io_failure, "SOCKS5: " + std::string(reply_text(reply)) + " for " +
                                    destination_host + ":" + std::to_string(destination_port));
    return stream;
}

}  // namespace darc::net
