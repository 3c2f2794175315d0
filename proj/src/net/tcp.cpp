#include "darc/net/tcp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>

#include "darc/error.hpp"

namespace darc::net {

namespace {

std::atomic<std::uint64_t> g_total_lookups{0};
std::atomic<std::uint64_t> g_onion_lookups{0};

bool ends_with_onion(const std::string& host) {
    static const std::string suffix = ".onion";
    return host.size() >= suffix.size() &&
           host.compare(host.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void wait_readable(int fd, int timeout_ms) {
    pollfd pfd{fd, POLLIN, 0};
    int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc == 0) raise(Errc::timeout, "read timed out");
    if (rc < 0) raise(Errc::io_failure, std::string("poll: ") + std::strerror(errno));
}

}  // namespace

ResolverAudit resolver_audit() {
    return {g_total_lookups.load(), g_onion_lookups.load()};
}

void reset_resolver_audit() {
    g_total_lookups = 0;
    g_onion_lookups = 0;
}

TcpStream::~TcpStream() { close(); }

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port, int timeout_ms) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);

    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        // Not numeric: this is a real resolver call. Onion names must never
        // take this path; the audit makes violations visible to the harness.
        g_total_lookups.fetch_add(1);
        if (ends_with_onion(host)) g_onion_lookups.fetch_add(1);
        addrinfo hints{};
        hints.ai_family = AF_INET;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* result = nullptr;
        if (::getaddrinfo(host.c_str(), nullptr, &hints, &result) != 0 || result == nullptr)
            raise(Errc::proxy_unreachable, "cannot resolve " + host);
        addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
        ::freeaddrinfo(result);
    }

    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) raise(Errc::io_failure, std::string("socket: ") + std::strerror(errno));
    TcpStream stream(fd);

    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    if (rc < 0 && errno != EINPROGRESS)
        raise(Errc::proxy_unreachable,
              "connect " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
    if (rc < 0) {
        pollfd pfd{fd, POLLOUT, 0};
        int ready = ::poll(&pfd, 1, timeout_ms);
        if (ready == 0) raise(Errc::timeout, "connect timed out: " + host);
        if (ready < 0) raise(Errc::io_failure, std::string("poll: ") + std::strerror(errno));
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0)
            raise(Errc::proxy_unreachable,
                  "connect " + host + ":" + std::to_string(port) + ": " + std::strerror(err));
    }
    ::fcntl(fd, F_SETFL, flags);
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return stream;
}

std::size_t TcpStream::read_some(char* buffer, std::size_t n, int timeout_ms) {
    wait_readable(fd_, timeout_ms);
    ssize_t got = ::recv(fd_, buffer, n, 0);
    if (got < 0) raise(Errc::io_failure, std::string("recv: ") + std::strerror(errno));
    return static_cast<std::size_t>(got);
}

void TcpStream::read_exact(char* buffer, std::size_t n, int timeout_ms) {
    std::size_t have = 0;
    while (have < n) {
        std::size_t got = read_some(buffer + have, n - have, timeout_ms);
        if (got == 0) raise(Errc::io_failure, "unexpected EOF");
        have += got;
    }
}

void TcpStream::write_all(std::string_view data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) raise(Errc::io_failure, std::string("send: ") + std::strerror(errno));
        sent += static_cast<std::size_t>(n);
    }
}

}  // namespace darc::net
