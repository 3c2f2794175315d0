#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "darc/canon/store.hpp"

namespace darc::canon {

struct ServiceConfig {
    std::string bind_host = "127.0.0.1";
    int port = 0;  // 0 picks an ephemeral port
    std::filesystem::path data_dir;
};

/// HTTP/JSON facade over the canonicalizer, versioned under /api/v1/.
/// Startup replays the observation log, so answers survive restarts.
class CanonService {
public:
    /// Throws Error{corrupt_log | outcome_mismatch} from log replay.
    explicit CanonService(ServiceConfig config);
    ~CanonService();

    CanonService(const CanonService&) = delete;
    CanonService& operator=(const CanonService&) = delete;

    /// Binds and serves in a background thread. Throws Error{bind_failure}.
    void start();
    void stop();

    int port() const { return port_; }
    std::string base_url() const;
    CanonStore& store() { return *store_; }

private:
    struct Routes;
    ServiceConfig config_;
    std::unique_ptr<CanonStore> store_;
    std::unique_ptr<Routes> routes_;
    std::thread serve_thread_;
    int port_ = 0;
};

}  // namespace darc::canon
