#include "darc/canon/client.hpp"

#include "darc/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace darc::canon {

using nlohmann::json;

namespace {

std::string url_encode(const std::string& value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

}  // namespace

HttpCanonClient::HttpCanonClient(std::string base_url, int timeout_ms)
    : base_url_(std::move(base_url)), timeout_ms_(timeout_ms) {}

std::string HttpCanonClient::get_json(const std::string& path_and_query) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(0, timeout_ms_ * 1000);
    client.set_read_timeout(0, timeout_ms_ * 1000);
    auto result = client.Get(path_and_query);
    if (!result)
        raise(Errc::io_failure, "canonicalizer unreachable at " + base_url_ + ": " +
                                    httplib::to_string(result.error()));
    if (result->status == 404) return "";  // unknown uri
    if (result->status != 200)
        raise(Errc::io_failure, "canonicalizer answered HTTP " +
                                    std::to_string(result->status) + " for " + path_and_query);
    return result->body;
}

std::optional<std::pair<std::string, CanonicalUri>> HttpCanonClient::current(
    const CanonicalUri& uri) {
    auto body = get_json("/api/v1/current?uri=" + url_encode(uri.render()));
    if (body.empty()) return std::nullopt;
    auto j = json::parse(body);
    return std::make_pair(j.at("site_id").get<std::string>(),
                          canonicalize_uri(j.at("current_uri").get<std::string>()));
}

std::optional<CanonicalUri> HttpCanonClient::at(const CanonicalUri& uri, const Timestamp14& t) {
    auto body = get_json("/api/v1/at?uri=" + url_encode(uri.render()) +
                         "&timestamp=" + t.value());
    if (body.empty()) return std::nullopt;
    auto j = json::parse(body);
    return canonicalize_uri(j.at("uri_at").get<std::string>());
}

std::optional<TimelineInfo> HttpCanonClient::timeline(const CanonicalUri& uri) {
    auto body = get_json("/api/v1/timeline?uri=" + url_encode(uri.render()));
    if (body.empty()) return std::nullopt;
    auto j = json::parse(body);
    TimelineInfo info;
    info.site_id = j.at("site_id").get<std::string>();
    for (const auto& alias : j.at("aliases"))
        info.aliases.push_back(
            {alias.at("source").get<std::string>(), alias.at("alias").get<std::string>()});
    for (const auto& entry : j.at("timeline"))
        info.entries.push_back({canonicalize_uri(entry.at("uri").get<std::string>()),
                                Timestamp14::parse(entry.at("first_seen").get<std::string>()),
                                Timestamp14::parse(entry.at("last_seen").get<std::string>())});
    if (info.entries.empty()) return std::nullopt;
    return info;
}

}  // namespace darc::canon
