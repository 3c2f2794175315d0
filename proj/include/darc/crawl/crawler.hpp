#pragma once

#include <memory>

#include "darc/canon/client.hpp"
#include "darc/clock.hpp"
#include "darc/crawl/fetch_result.hpp"
#include "darc/crawl/types.hpp"
#include "darc/warc/store.hpp"

namespace darc::crawl {

/// Outcome of the canonicalizer handshake at frontier pop time.
struct RewriteOutcome {
    bool rewritten = false;
    bool canon_unknown = false;
    bool canon_unavailable = false;
    std::string from_host;
    std::string to_host;
};

/// Asks the canonicalizer for the current host of `entry`'s target and
/// rewrites the entry in place when the site has shifted (path and query are
/// preserved). Unreachable canonicalizers and unknown URIs degrade to the
/// original target, flagged. `canon` may be null (no handshake configured).
RewriteOutcome rewrite_to_current_host(FrontierEntry& entry, canon::CanonClient* canon);

/// Seed-driven archival crawler: level-synchronized BFS over a deduplicated
/// frontier, per-host politeness and robots adherence, SOCKS5-proxied
/// fetching, and capture hand-off to the WARC store together with the
/// canonicalizer's first-observed URI-R.
class Crawler {
public:
    Crawler(CrawlJob job, warc::WarcStore& store, canon::CanonClient* canon,
            const Clock& clock);
    ~Crawler();

    /// Runs the crawl to completion. Throws Error{store_failure} when the
    /// WARC store fails; per-fetch errors are tallied, not fatal.
    CrawlReport run();

private:
    struct State;
    void worker_loop();
    void process_entry(FrontierEntry entry);

    CrawlJob job_;
    warc::WarcStore& store_;
    canon::CanonClient* canon_;
    const Clock& clock_;
    std::unique_ptr<State> state_;
};

}  // namespace darc::crawl
