#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace darc::sim {

/// What the stub proxy did with one CONNECT request.
struct ProxyAuditEntry {
    std::string host;
    std::uint16_t port = 0;
    std::string result;  // "connected" | "refused" | "unreachable"
};

/// Desk-scale stand-in for a Tor SOCKS proxy: accepts SOCKS5 CONNECT with
/// hostname addressing and routes known onion names to local listeners.
/// Unknown names answer host-unreachable; retired-era names answer
/// connection-refused, mimicking a hidden service whose key rotated away.
/// Every resolution request is recorded for audit.
class StubSocks5Proxy {
public:
    StubSocks5Proxy();
    ~StubSocks5Proxy();

    StubSocks5Proxy(const StubSocks5Proxy&) = delete;
    StubSocks5Proxy& operator=(const StubSocks5Proxy&) = delete;

    std::uint16_t port() const { return port_; }

    /// Routes `host` to 127.0.0.1:local_port.
    void map_host(const std::string& host, std::uint16_t local_port);
    /// Keeps `host` known but refuses connections (retired era).
    void retire_host(const std::string& host);
    void unmap_host(const std::string& host);

    std::vector<ProxyAuditEntry> audit() const;

private:
    void accept_loop();
    void serve_connection(int fd);

    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::thread accept_thread_;
    mutable std::mutex mutex_;
    struct Route {
        std::uint16_t port = 0;
        bool active = false;
    };
    std::map<std::string, Route> table_;
    std::vector<ProxyAuditEntry> audit_;
    std::vector<std::thread> workers_;
    bool stopping_ = false;
};

}  // namespace darc::sim
