#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "darc/core/timestamp.hpp"

namespace darc::sim {

struct SimPage {
    std::vector<std::string> links;       // navigation hrefs
    std::vector<std::string> requisites;  // stylesheet/image/script references
    std::string extra_html;               // appended verbatim to the body
};

struct EraSpec {
    std::string address;  // onion hostname
    Timestamp14 active_from;
};

/// Declarative description of one synthetic onion site: a page graph, the
/// era schedule of its shifting addresses, and a robots policy.
struct SimSiteSpec {
    std::string name;
    std::vector<EraSpec> eras;  // ordered by active_from
    std::map<std::string, SimPage> pages;  // keyed by path, must contain "/"
    std::vector<std::string> robots_disallow;

    /// Era active at `now`: the last era whose active_from <= now, clamped to
    /// the first era before the schedule starts.
    const EraSpec& era_at(const Timestamp14& now) const;

    /// Deterministic body bytes served for `path` (pages and assets alike).
    std::string body_for(const std::string& path) const;
    std::string content_type_for(const std::string& path) const;
    bool serves(const std::string& path) const;

    /// Paths reachable from "/" by navigation links only, up to `max_depth`.
    std::set<std::string> reachable_pages(int max_depth) const;
    /// Requisite paths referenced by the given pages.
    std::set<std::string> requisites_of(const std::set<std::string>& pages_in) const;
};

/// A SimSiteSpec served over a local HTTP listener.
class SimSite {
public:
    explicit SimSite(SimSiteSpec spec);
    ~SimSite();

    SimSite(const SimSite&) = delete;
    SimSite& operator=(const SimSite&) = delete;

    int port() const { return port_; }
    const SimSiteSpec& spec() const { return spec_; }

private:
    struct Impl;
    SimSiteSpec spec_;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

/// A 50-ish page tree used by the end-to-end scenarios: root links to
/// `fanout` section pages, each linking to `fanout` leaf pages; every page
/// pulls the shared stylesheet and a per-section image.
SimSiteSpec make_tree_site(const std::string& name, const std::string& era1_address,
                           int fanout = 7);

}  // namespace darc::sim
