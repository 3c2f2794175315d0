#include "darc/crawl/crawler.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <set>
#include <thread>

#include "darc/crawl/link_extract.hpp"
#include "darc/crawl/robots.hpp"
#include "darc/error.hpp"
#include "darc/net/http_client.hpp"
#include "darc/net/socks5.hpp"
#include "html_scan.hpp"
#include "json.hpp"

namespace darc::crawl {

using nlohmann::json;

namespace {

std::int64_t steady_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

CanonicalUri root_of(const CanonicalUri& uri) {
    CanonicalUri root = uri;
    root.path = "/";
    root.query.reset();
    root.port.reset();
    return root;
}

bool is_redirect(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

}  // namespace

void CrawlJob::validate() const {
    if (seeds.empty()) raise(Errc::unparseable, "crawl job needs at least one seed");
    if (max_depth < 0 || workers < 1 || politeness.per_host_delay_ms < 0 ||
        max_pages_per_host < 0)
        raise(Errc::unparseable, "crawl job has out-of-range numeric fields");
    for (const auto& seed : seeds) {
        if (!scope.allowed_hosts.count(seed.host))
            raise(Errc::unparseable, "seed host outside scope: " + seed.host);
    }
}

bool in_scope(const CanonicalUri& uri, const ScopePolicy& policy, LinkRole role) {
    if (policy.allowed_hosts.count(uri.host)) return true;
    return role == LinkRole::embedded && policy.allow_embedded_cross_host;
}

std::string CrawlReport::to_json() const {
    json fetch_list = json::array();
    for (const auto& fetch : fetches) {
        fetch_list.push_back(json{{"host", fetch.host},
                                  {"uri", fetch.uri},
                                  {"depth", fetch.depth},
                                  {"role", link_role_name(fetch.role)},
                                  {"status", fetch.status},
                                  {"started_ms", fetch.started_ms},
                                  {"flags", fetch.flags}});
    }
    json rewrite_list = json::array();
    for (const auto& [from, to] : rewrites)
        rewrite_list.push_back(json{{"from_host", from}, {"to_host", to}});
    json body{{"counts",
               {{"fetched", counts.fetched},
                {"captured", counts.captured},
                {"skipped_scope", counts.skipped_scope},
                {"robots_denied", counts.robots_denied},
                {"shifted_targets", counts.shifted_targets},
                {"errors", counts.errors},
                {"skipped_caps", counts.skipped_caps}}},
              {"rewrites", rewrite_list},
              {"fetches", fetch_list}};
    return body.dump(2);
}

RewriteOutcome rewrite_to_current_host(FrontierEntry& entry, canon::CanonClient* canon) {
    RewriteOutcome outcome;
    if (!canon || !entry.uri.onion_host()) return outcome;
    try {
        auto answer = canon->current(root_of(entry.uri));
        if (!answer) {
            outcome.canon_unknown = true;
            return outcome;
        }
        const std::string& current_host = answer->second.host;
        if (current_host != entry.uri.host) {
            outcome.rewritten = true;
            outcome.from_host = entry.uri.host;
            outcome.to_host = current_host;
            entry.uri = entry.uri.with_host(current_host);
        }
    } catch (const Error&) {
        outcome.canon_unavailable = true;
    }
    return outcome;
}

struct Crawler::State {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<FrontierEntry> current_level;
    std::deque<FrontierEntry> next_level;
    std::set<std::string> visited;          // canonical renders
    std::set<std::string> effective_hosts;  // scope ∪ canonicalizer rewrites
    std::map<std::string, std::int64_t> next_allowed_ms;
    std::set<std::string> hosts_in_flight;
    std::map<std::string, int> fetches_per_host;
    std::map<std::string, RobotsPolicy> robots_cache;
    int active_workers = 0;
    bool done = false;
    std::exception_ptr fatal;
    CrawlReport report;
};

Crawler::Crawler(CrawlJob job, warc::WarcStore& store, canon::CanonClient* canon,
                 const Clock& clock)
    : job_(std::move(job)), store_(store), canon_(canon), clock_(clock), state_(new State) {}

Crawler::~Crawler() = default;

CrawlReport Crawler::run() {
    job_.validate();
    State& st = *state_;
    st.effective_hosts = job_.scope.allowed_hosts;
    for (const auto& seed : job_.seeds) {
        if (st.visited.insert(seed.render()).second)
            st.current_level.push_back(
                {seed, 0, LinkRole::navigation, std::nullopt, clock_.now14()});
    }

    std::vector<std::thread> workers;
    for (int i = 0; i < job_.workers; ++i)
        workers.emplace_back([this] { worker_loop(); });
    for (auto& worker : workers) worker.join();

    if (st.fatal) std::rethrow_exception(st.fatal);
    return std::move(st.report);
}

void Crawler::worker_loop() {
    State& st = *state_;
    std::unique_lock lock(st.mutex);
    while (true) {
        if (st.done || st.fatal) return;

        auto runnable = st.current_level.end();
        for (auto it = st.current_level.begin(); it != st.current_level.end(); ++it) {
            if (!st.hosts_in_flight.count(it->uri.host)) {
                runnable = it;
                break;
            }
        }

        if (runnable != st.current_level.end()) {
            FrontierEntry entry = std::move(*runnable);
            st.current_level.erase(runnable);
            st.hosts_in_flight.insert(entry.uri.host);
            ++st.active_workers;
            lock.unlock();

            std::string claimed_host = entry.uri.host;
            try {
                process_entry(std::move(entry));
            } catch (...) {
                lock.lock();
                st.fatal = std::current_exception();
                st.hosts_in_flight.erase(claimed_host);
                --st.active_workers;
                st.cv.notify_all();
                return;
            }

            lock.lock();
            st.hosts_in_flight.erase(claimed_host);
            --st.active_workers;
            st.cv.notify_all();
            continue;
        }

        if (st.current_level.empty() && st.active_workers == 0) {
            if (st.next_level.empty()) {
                st.done = true;
                st.cv.notify_all();
                return;
            }
            st.current_level.swap(st.next_level);
            st.cv.notify_all();
            continue;
        }
        st.cv.wait(lock);
    }
}

void Crawler::process_entry(FrontierEntry entry) {
    State& st = *state_;

    // canonicalizer handshake happens at pop time so long-queued entries
    // still go out with current hosts
    RewriteOutcome rewrite = rewrite_to_current_host(entry, canon_);
    std::vector<std::string> entry_flags;
    if (rewrite.rewritten) {
        entry_flags.push_back("rewritten");
        std::lock_guard guard(st.mutex);
        st.effective_hosts.insert(rewrite.to_host);
        st.report.rewrites.emplace_back(rewrite.from_host, rewrite.to_host);
        ++st.report.counts.shifted_targets;
        if (!st.visited.insert(entry.uri.render()).second) return;  // already fetched there
    }
    if (rewrite.canon_unknown) entry_flags.push_back("canon_unknown");
    if (rewrite.canon_unavailable) entry_flags.push_back("canon_unavailable");

    const std::string host = entry.uri.host;

    {
        std::lock_guard guard(st.mutex);
        if (job_.max_pages_per_host > 0 &&
            st.fetches_per_host[host] >= job_.max_pages_per_host) {
            ++st.report.counts.skipped_caps;
            return;
        }
        ++st.fetches_per_host[host];
    }

    // The worker holds this host exclusively, so politeness is a local wait:
    // consecutive fetch starts for one host stay >= the configured delay.
    auto wait_host_slot = [&]() -> std::int64_t {
        std::int64_t allowed;
        {
            std::lock_guard guard(st.mutex);
            allowed = st.next_allowed_ms.count(host) ? st.next_allowed_ms[host] : 0;
        }
        std::int64_t now = steady_ms();
        if (now < allowed)
            std::this_thread::sleep_for(std::chrono::milliseconds(allowed - now));
        std::int64_t start = steady_ms();
        {
            std::lock_guard guard(st.mutex);
            st.next_allowed_ms[host] = start + job_.politeness.per_host_delay_ms;
        }
        return start;
    };

    auto record_audit = [&](const CanonicalUri& uri, int status, std::int64_t started,
                            std::vector<std::string> flags, LinkRole role) {
        std::lock_guard guard(st.mutex);
        FetchAudit audit;
        audit.host = uri.host;
        audit.uri = uri.render();
        audit.depth = entry.depth;
        audit.role = role;
        audit.status = status;
        audit.started_ms = started;
        audit.flags = std::move(flags);
        st.report.fetches.push_back(std::move(audit));
    };

    auto fetch_one = [&](const CanonicalUri& target) -> FetchResult {
        if (target.scheme == Scheme::https)
            raise(Errc::unsupported_scheme,
                  "protocol-level engine fetches http only: " + target.render());
        std::uint16_t port = target.port.value_or(80);
        net::TcpStream stream = net::socks5_connect(
            net::ProxyEndpoint{job_.proxy.host, job_.proxy.port}, target.host, port,
            job_.limits.timeout_ms);
        std::string host_header = target.host;
        if (target.port) host_header += ":" + std::to_string(*target.port);
        std::string path = target.path;
        if (target.query) path += "?" + *target.query;

        FetchResult fetch;
        fetch.uri = target;
        fetch.fetch_started_at = clock_.now14();
        fetch.via_proxy = true;
        auto response = net::http_get(stream, host_header, path, job_.limits, job_.user_agent,
                                      &fetch.request_head);
        fetch.status = response.status;
        fetch.response_head = response.head;
        fetch.body = std::move(response.body);
        return fetch;
    };

    // robots.txt: fetched once per host per crawl, never captured; fetch or
    // parse failures degrade to allow-all
    if (job_.politeness.robots == RobotsMode::obey && entry.uri.path != "/robots.txt") {
        bool need_fetch;
        {
            std::lock_guard guard(st.mutex);
            need_fetch = !st.robots_cache.count(host);
        }
        if (need_fetch) {
            CanonicalUri robots_uri = entry.uri;
            robots_uri.path = "/robots.txt";
            robots_uri.query.reset();
            RobotsPolicy policy;
            std::int64_t started = wait_host_slot();
            int status = 0;
            try {
                FetchResult robots = fetch_one(robots_uri);
                status = robots.status;
                if (robots.status == 200)
                    policy = RobotsPolicy::parse(robots.body, job_.user_agent);
            } catch (const Error&) {
                // unreachable robots.txt allows everything
            }
            record_audit(robots_uri, status, started, {"robots"}, LinkRole::embedded);
            std::lock_guard guard(st.mutex);
            st.robots_cache.emplace(host, std::move(policy));
        }
        bool allowed;
        {
            std::lock_guard guard(st.mutex);
            std::string path = entry.uri.path + (entry.uri.query ? "?" + *entry.uri.query : "");
            allowed = st.robots_cache.at(host).allows(path);
        }
        if (!allowed) {
            std::lock_guard guard(st.mutex);
            ++st.report.counts.robots_denied;
            FetchAudit audit;
            audit.host = host;
            audit.uri = entry.uri.render();
            audit.depth = entry.depth;
            audit.role = entry.role;
            audit.status = 0;
            audit.started_ms = steady_ms();
            audit.flags = {"robots_denied"};
            st.report.fetches.push_back(std::move(audit));
            return;
        }
    }

    // fetch, following same-host redirects; each hop is captured on its own
    std::vector<FetchResult> hops;
    std::vector<std::pair<CanonicalUri, LinkRole>> discovered;
    CanonicalUri target = entry.uri;
    std::set<std::string> chain{target.render()};
    constexpr int kMaxRedirects = 5;

    for (int hop = 0;; ++hop) {
        std::int64_t started = wait_host_slot();
        FetchResult fetch;
        try {
            fetch = fetch_one(target);
        } catch (const Error& e) {
            auto flags = std::move(entry_flags);
            flags.push_back(std::string("error:") + e.code_name());
            record_audit(target, 0, started, std::move(flags), entry.role);
            std::lock_guard guard(st.mutex);
            ++st.report.counts.errors;
            return;
        }
        {
            std::lock_guard guard(st.mutex);
            ++st.report.counts.fetched;
        }
        std::vector<std::string> flags = entry_flags;
        entry_flags.clear();
        record_audit(target, fetch.status, started, std::move(flags), entry.role);
        hops.push_back(std::move(fetch));

        const FetchResult& last = hops.back();
        if (!is_redirect(last.status)) break;

        // parse Location out of the stored head
        std::string location;
        std::size_t line_start = 0;
        while (line_start < last.response_head.size()) {
            auto eol = last.response_head.find("\r\n", line_start);
            if (eol == std::string::npos) break;
            std::string line = last.response_head.substr(line_start, eol - line_start);
            line_start = eol + 2;
            if (line.size() > 9) {
                std::string name = line.substr(0, 9);
                std::transform(name.begin(), name.end(), name.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                if (name == "location:")
                    location = htmlscan::trim_ascii(line.substr(9));
            }
        }
        if (location.empty()) break;
        CanonicalUri next_target;
        try {
            next_target = resolve_reference(target, location);
        } catch (const Error&) {
            break;
        }
        if (next_target.host != target.host) {
            // cross-host redirect: not followed inline, joins the frontier
            discovered.emplace_back(next_target, LinkRole::navigation);
            break;
        }
        if (hop + 1 > kMaxRedirects || !chain.insert(next_target.render()).second) {
            record_audit(next_target, 0, steady_ms(), {"error:too_many_redirects"},
                         entry.role);
            std::lock_guard guard(st.mutex);
            ++st.report.counts.errors;
            break;
        }
        {
            std::lock_guard guard(st.mutex);
            st.visited.insert(next_target.render());
        }
        target = next_target;
    }

    // canonicalizer context for the WARC extension field
    std::optional<warc::FirstObserved> first_observed;
    if (canon_ && entry.uri.onion_host()) {
        try {
            if (auto info = canon_->timeline(root_of(entry.uri)))
                first_observed = warc::FirstObserved{info->first_observed(), info->current(),
                                                     info->site_id};
        } catch (const Error&) {
            // degraded: capture without the extension field
        }
    }

    for (const auto& hop : hops) {
        try {
            store_.write_capture(hop, first_observed);
        } catch (const Error& e) {
            raise(Errc::store_failure, std::string("warc store failed: ") + e.what());
        }
        std::lock_guard guard(st.mutex);
        ++st.report.counts.captured;
    }

    // grow the frontier from the final body; only navigation fetches spawn
    // links, requisites are leaves
    if (!hops.empty() && entry.role == LinkRole::navigation) {
        const FetchResult& last = hops.back();
        auto content_type_of = [](const FetchResult& fetch) -> std::string {
            std::size_t line_start = 0;
            while (line_start < fetch.response_head.size()) {
                auto eol = fetch.response_head.find("\r\n", line_start);
                if (eol == std::string::npos) break;
                std::string line = fetch.response_head.substr(line_start, eol - line_start);
                line_start = eol + 2;
                std::string lower = line;
                std::transform(lower.begin(), lower.end(), lower.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                if (lower.rfind("content-type:", 0) == 0) return line.substr(13);
            }
            return "";
        };
        if (last.status == 200) {
            for (const auto& link :
                 extract_links(last.body, content_type_of(last), last.uri)) {
                discovered.emplace_back(link.uri, link.role);
            }
        }
    }

    std::lock_guard guard(st.mutex);
    for (auto& [uri, role] : discovered) {
        if (st.visited.count(uri.render())) continue;
        ScopePolicy effective{st.effective_hosts, job_.scope.allow_embedded_cross_host};
        if (!in_scope(uri, effective, role)) {
            st.visited.insert(uri.render());
            ++st.report.counts.skipped_scope;
            continue;
        }
        if (role == LinkRole::embedded) {
            st.visited.insert(uri.render());
            st.current_level.push_back(
                {uri, entry.depth, role, entry.uri, clock_.now14()});
        } else {
            if (entry.depth + 1 > job_.max_depth) continue;
            st.visited.insert(uri.render());
            st.next_level.push_back(
                {uri, entry.depth + 1, role, entry.uri, clock_.now14()});
        }
    }
    st.cv.notify_all();
}

}  // namespace darc::crawl
