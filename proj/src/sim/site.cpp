#include "darc/sim/site.hpp"

#include <algorithm>
#include <deque>

#include "darc/error.hpp"
#include "httplib.h"

namespace darc::sim {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

const EraSpec& SimSiteSpec::era_at(const Timestamp14& now) const {
    const EraSpec* chosen = &eras.front();
    for (const auto& era : eras) {
        if (era.active_from <= now) chosen = &era;
    }
    return *chosen;
}

bool SimSiteSpec::serves(const std::string& path) const {
    if (pages.count(path)) return true;
    if (path == "/robots.txt" && !robots_disallow.empty()) return true;
    for (const auto& [page_path, page] : pages) {
        for (const auto& requisite : page.requisites) {
            if (requisite == path) return true;
        }
    }
    return false;
}

std::string SimSiteSpec::content_type_for(const std::string& path) const {
    if (pages.count(path)) return "text/html; charset=utf-8";
    if (ends_with(path, ".css")) return "text/css";
    if (ends_with(path, ".js")) return "application/javascript";
    if (ends_with(path, ".png")) return "image/png";
    if (ends_with(path, ".txt")) return "text/plain";
    return "application/octet-stream";
}

std::string SimSiteSpec::body_for(const std::string& path) const {
    auto page_it = pages.find(path);
    if (page_it != pages.end()) {
        const SimPage& page = page_it->second;
        std::string html = "<!DOCTYPE html>\n<html>\n<head>\n<title>" + name + " " + path +
                           "</title>\n";
        for (const auto& requisite : page.requisites) {
            if (ends_with(requisite, ".css"))
                html += "<link rel=\"stylesheet\" href=\"" + requisite + "\">\n";
        }
        html += "</head>\n<body>\n<h1>" + name + " " + path + "</h1>\n";
        html += "<p>Deterministic page body for " + path + " of " + name + ".</p>\n";
        for (const auto& link : page.links)
            html += "<a href=\"" + link + "\">" + link + "</a>\n";
        for (const auto& requisite : page.requisites) {
            if (ends_with(requisite, ".png"))
                html += "<img src=\"" + requisite + "\" alt=\"img\">\n";
            else if (ends_with(requisite, ".js"))
                html += "<script src=\"" + requisite + "\"></script>\n";
        }
        if (!page.extra_html.empty()) html += page.extra_html + "\n";
        html += "</body>\n</html>\n";
        return html;
    }
    if (path == "/robots.txt") {
        std::string robots = "User-agent: *\n";
        for (const auto& disallowed : robots_disallow) robots += "Disallow: " + disallowed + "\n";
        return robots;
    }
    if (ends_with(path, ".css"))
        return "/* " + name + path + " */\nbody { font-family: monospace; color: #223344; }\n";
    if (ends_with(path, ".js"))
        return "// " + name + path + "\nconsole.log(\"static capture only\");\n";
    // binary-ish deterministic asset
    std::string blob = "PNG-SIM:" + name + ":" + path + ":";
    while (blob.size() < 256) blob += static_cast<char>((blob.size() * 31 + path.size()) % 251);
    return blob;
}

std::set<std::string> SimSiteSpec::reachable_pages(int max_depth) const {
    std::set<std::string> seen{"/"};
    std::deque<std::pair<std::string, int>> frontier{{"/", 0}};
    while (!frontier.empty()) {
        auto [path, depth] = frontier.front();
        frontier.pop_front();
        if (depth >= max_depth) continue;
        auto it = pages.find(path);
        if (it == pages.end()) continue;
        for (const auto& link : it->second.links) {
            if (pages.count(link) && seen.insert(link).second)
                frontier.push_back({link, depth + 1});
        }
    }
    return seen;
}

std::set<std::string> SimSiteSpec::requisites_of(const std::set<std::string>& pages_in) const {
    std::set<std::string> out;
    for (const auto& path : pages_in) {
        auto it = pages.find(path);
        if (it == pages.end()) continue;
        for (const auto& requisite : it->second.requisites) out.insert(requisite);
    }
    return out;
}

struct SimSite::Impl {
    httplib::Server server;
    std::thread thread;
};

SimSite::SimSite(SimSiteSpec spec) : spec_(std::move(spec)), impl_(new Impl) {
    if (!spec_.pages.count("/")) raise(Errc::script_error, "sim site needs a root page");
    impl_->server.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
        if (!spec_.serves(req.path)) {
            res.status = 404;
            res.set_content("not found: " + req.path, "text/plain");
            return;
        }
        res.set_content(spec_.body_for(req.path), spec_.content_type_for(req.path));
    });
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) raise(Errc::port_exhausted, "sim site cannot bind");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

SimSite::~SimSite() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

SimSiteSpec make_tree_site(const std::string& name, const std::string& era1_address,
                           int fanout) {
    SimSiteSpec spec;
    spec.name = name;
    spec.eras.push_back({era1_address, Timestamp14::parse("20210101000000")});

    SimPage root;
    root.requisites = {"/static/site.css", "/static/logo.png"};
    for (int section = 0; section < fanout; ++section) {
        std::string section_path = "/s" + std::to_string(section) + "/";
        root.links.push_back(section_path);
        SimPage section_page;
        section_page.requisites = {"/static/site.css",
                                   "/static/s" + std::to_string(section) + ".png"};
        section_page.links.push_back("/");
        for (int leaf = 0; leaf < fanout; ++leaf) {
            std::string leaf_path =
                "/s" + std::to_string(section) + "/p" + std::to_string(leaf);
            section_page.links.push_back(leaf_path);
            SimPage leaf_page;
            leaf_page.links = {"/", section_path};
            leaf_page.requisites = {"/static/site.css"};
            spec.pages[leaf_path] = leaf_page;
        }
        spec.pages[section_path] = section_page;
    }
    spec.pages["/"] = root;
    return spec;
}

}  // namespace darc::sim
