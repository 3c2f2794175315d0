#include "darc/sim/proxy.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "darc/error.hpp"

namespace darc::sim {

namespace {

bool read_exact_fd(int fd, char* buffer, std::size_t n) {
    std::size_t have = 0;
    while (have < n) {
        ssize_t got = ::recv(fd, buffer + have, n - have, 0);
        if (got <= 0) return false;
        have += static_cast<std::size_t>(got);
    }
    return true;
}

bool write_all_fd(int fd, const char* buffer, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        ssize_t got = ::send(fd, buffer + sent, n - sent, MSG_NOSIGNAL);
        if (got <= 0) return false;
        sent += static_cast<std::size_t>(got);
    }
    return true;
}

void send_reply(int fd, unsigned char code) {
    // REP with a zero IPv4 bind address
    const char reply[] = {0x05, static_cast<char>(code), 0x00, 0x01, 0, 0, 0, 0, 0, 0};
    write_all_fd(fd, reply, sizeof reply);
}

// Bidirectional byte pump until either side closes.
void splice(int a, int b) {
    pollfd fds[2] = {{a, POLLIN, 0}, {b, POLLIN, 0}};
    char buffer[16384];
    while (true) {
        fds[0].revents = fds[1].revents = 0;
        if (::poll(fds, 2, 30000) <= 0) return;
        for (int i = 0; i < 2; ++i) {
            if (fds[i].revents & (POLLIN | POLLHUP)) {
                ssize_t n = ::recv(fds[i].fd, buffer, sizeof buffer, 0);
                if (n <= 0) return;
                if (!write_all_fd(i == 0 ? b : a, buffer, static_cast<std::size_t>(n))) return;
            }
            if (fds[i].revents & (POLLERR | POLLNVAL)) return;
        }
    }
}

}  // namespace

StubSocks5Proxy::StubSocks5Proxy() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) raise(Errc::port_exhausted, "socket failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
        ::listen(listen_fd_, 64) < 0)
        raise(Errc::port_exhausted, std::string("bind/listen: ") + std::strerror(errno));
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    accept_thread_ = std::thread([this] { accept_loop(); });
}

StubSocks5Proxy::~StubSocks5Proxy() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (accept_thread_.joinable()) accept_thread_.join();
    for (auto& worker : workers_) {
        if (worker.joinable()) worker.join();
    }
}

void StubSocks5Proxy::map_host(const std::string& host, std::uint16_t local_port) {
    std::lock_guard lock(mutex_);
    table_[host] = {local_port, true};
}

void StubSocks5Proxy::retire_host(const std::string& host) {
    std::lock_guard lock(mutex_);
    table_[host].active = false;
}

void StubSocks5Proxy::unmap_host(const std::string& host) {
    std::lock_guard lock(mutex_);
    table_.erase(host);
}

std::vector<ProxyAuditEntry> StubSocks5Proxy::audit() const {
    std::lock_guard lock(mutex_);
    return audit_;
}

void StubSocks5Proxy::accept_loop() {
    while (true) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) return;  // listener closed
        std::lock_guard lock(mutex_);
        if (stopping_) {
            ::close(fd);
            return;
        }
        workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void StubSocks5Proxy::serve_connection(int fd) {
    char greeting[2];
    if (!read_exact_fd(fd, greeting, 2) || greeting[0] != 0x05) {
        ::close(fd);
        return;
    }
    std::string methods(static_cast<unsigned char>(greeting[1]), '\0');
    if (!read_exact_fd(fd, methods.data(), methods.size())) {
        ::close(fd);
        return;
    }
    write_all_fd(fd, "\x05\x00", 2);  // no-auth

    char head[4];
    if (!read_exact_fd(fd, head, 4) || head[0] != 0x05 || head[1] != 0x01 || head[3] != 0x03) {
        // only CONNECT with hostname addressing is implemented
        send_reply(fd, 0x07);
        ::close(fd);
        return;
    }
    char name_len = 0;
    if (!read_exact_fd(fd, &name_len, 1)) {
        ::close(fd);
        return;
    }
    std::string host(static_cast<unsigned char>(name_len), '\0');
    char port_bytes[2];
    if (!read_exact_fd(fd, host.data(), host.size()) || !read_exact_fd(fd, port_bytes, 2)) {
        ::close(fd);
        return;
    }
    std::uint16_t port = static_cast<std::uint16_t>(
        (static_cast<unsigned char>(port_bytes[0]) << 8) |
        static_cast<unsigned char>(port_bytes[1]));

    std::uint16_t local_port = 0;
    std::string result;
    {
        std::lock_guard lock(mutex_);
        auto it = table_.find(host);
        if (it == table_.end()) {
            result = "unreachable";
        } else if (!it->second.active) {
            result = "refused";
        } else {
            result = "connected";
            local_port = it->second.port;
        }
        audit_.push_back({host, port, result});
    }

    if (result == "unreachable") {
        send_reply(fd, 0x04);
        ::close(fd);
        return;
    }
    if (result == "refused") {
        send_reply(fd, 0x05);
        ::close(fd);
        return;
    }

    int upstream = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(local_port);
    if (::connect(upstream, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        ::close(upstream);
        send_reply(fd, 0x05);
        {
            std::lock_guard lock(mutex_);
            audit_.back().result = "refused";
        }
        ::close(fd);
        return;
    }
    send_reply(fd, 0x00);
    splice(fd, upstream);
    ::close(upstream);
    ::close(fd);
}

}  // namespace darc::sim
