#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "darc/core/timestamp.hpp"
#include "darc/core/uri.hpp"
#include "darc/net/http_client.hpp"
#include "darc/net/socks5.hpp"

namespace darc::crawl {

enum class LinkRole { navigation, embedded };

const char* link_role_name(LinkRole role) noexcept;

/// Which hosts a crawl may touch. Navigation links must stay on
/// allowed_hosts; page requisites may leave them when
/// allow_embedded_cross_host is set.
struct ScopePolicy {
    std::set<std::string> allowed_hosts;  // lowercase hostnames
    bool allow_embedded_cross_host = false;
};

bool in_scope(const CanonicalUri& uri, const ScopePolicy& policy, LinkRole role);

enum class RobotsMode { obey, ignore };

struct PolitenessPolicy {
    std::int64_t per_host_delay_ms = 0;
    RobotsMode robots = RobotsMode::obey;
};

struct CrawlJob {
    std::vector<CanonicalUri> seeds;
    ScopePolicy scope;
    PolitenessPolicy politeness;
    net::ProxyEndpoint proxy;
    int max_depth = 0;
    int max_pages_per_host = 0;  // 0 = unlimited
    int workers = 1;
    net::HttpLimits limits;
    std::string user_agent = "darc/0.1";

    /// Seeds non-empty and inside scope, sane numeric ranges.
    /// Throws Error{unparseable}.
    void validate() const;
};

struct FrontierEntry {
    CanonicalUri uri;
    int depth = 0;
    LinkRole role = LinkRole::navigation;
    std::optional<CanonicalUri> discovered_via;
    Timestamp14 enqueued_at;
};

/// One fetch attempt (including robots.txt probes), for the audit log.
struct FetchAudit {
    std::string host;  // host actually connected to (post-rewrite)
    std::string uri;
    int depth = 0;
    LinkRole role = LinkRole::navigation;
    int status = 0;  // 0 on transport error
    std::int64_t started_ms = 0;  // steady-clock milliseconds, for politeness audits
    std::string at14;             // capture-clock timestamp of the attempt
    std::vector<std::string> flags;

    bool has_flag(const std::string& flag) const {
        for (const auto& f : flags)
            if (f == flag) return true;
        return false;
    }
};

struct CrawlCounts {
    std::uint64_t fetched = 0;         // completed HTTP exchanges
    std::uint64_t captured = 0;        // response records written
    std::uint64_t skipped_scope = 0;   // links dropped by policy
    std::uint64_t robots_denied = 0;
    std::uint64_t shifted_targets = 0;  // frontier rewrites via canonicalizer
    std::uint64_t errors = 0;
    std::uint64_t skipped_caps = 0;  // dropped by max_pages_per_host
};

struct CrawlReport {
    CrawlCounts counts;
    std::vector<FetchAudit> fetches;
    std::vector<std::pair<std::string, std::string>> rewrites;  // host from -> to
    std::string to_json() const;
};

}  // namespace darc::crawl
