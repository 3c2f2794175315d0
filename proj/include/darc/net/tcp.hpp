#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace darc::net {

/// Counters for local name resolution, kept so the sim harness can assert
/// that onion names are never resolved locally (they must only ever travel
/// inside SOCKS5 CONNECT requests).
struct ResolverAudit {
    std::uint64_t total_lookups = 0;
    std::uint64_t onion_lookups = 0;
};

ResolverAudit resolver_audit();
void reset_resolver_audit();

/// Thin RAII wrapper over a connected TCP socket with deadline-based reads.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream();

    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    /// Connects to host:port within timeout_ms. Numeric addresses never touch
    /// the resolver. Throws Error{proxy_unreachable} on failure.
    static TcpStream connect(const std::string& host, std::uint16_t port, int timeout_ms);

    /// Reads up to `n` bytes; 0 means orderly EOF.
    /// Throws Error{timeout | io_failure}.
    std::size_t read_some(char* buffer, std::size_t n, int timeout_ms);

    /// Reads exactly `n` bytes. Throws Error{timeout | io_failure}.
    void read_exact(char* buffer, std::size_t n, int timeout_ms);

    void write_all(std::string_view data);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }
    void close();

private:
    int fd_ = -1;
};

}  // namespace darc::net
