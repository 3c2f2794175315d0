#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "darc/canon/client.hpp"
#include "darc/replay/resolver.hpp"
#include "darc/warc/cdx.hpp"

namespace darc::replay {

struct ReplayConfig {
    std::string bind_host = "127.0.0.1";
    int port = 0;  // 0 picks an ephemeral port
    std::filesystem::path warc_dir;
    std::string replay_prefix = "/replay";
};

/// Wayback-style replay: `GET /replay/<ts14>/<uri>` serves the nearest
/// capture with link rewriting (append `id_` to the timestamp for the
/// identity payload), `/timemap/link/<uri>` serves RFC 7089 TimeMaps spanning
/// every observed URI-R of the site, and `/api/v1/lookup` exposes the
/// resolution trace. Handlers are stateless over an immutable index snapshot;
/// reload_index swaps snapshots atomically.
class ReplayService {
public:
    ReplayService(ReplayConfig config, warc::CdxIndex index, canon::CanonClient* canon);
    ~ReplayService();

    ReplayService(const ReplayService&) = delete;
    ReplayService& operator=(const ReplayService&) = delete;

    void start();  // throws Error{bind_failure}
    void stop();

    void reload_index(warc::CdxIndex index);

    int port() const { return port_; }
    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    ReplayConfig config_;
    canon::CanonClient* canon_;
    std::thread serve_thread_;
    int port_ = 0;
};

}  // namespace darc::replay
