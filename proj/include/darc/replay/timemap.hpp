#pragma once

#include <string>
#include <vector>

#include "darc/replay/resolver.hpp"

namespace darc::replay {

/// Renders an RFC 7089 link-format TimeMap. `service_base` is the absolute
/// base of the replay service (e.g. "http://127.0.0.1:8700"); memento links
/// embed each capture's era-appropriate original URI in its URI-M.
/// `entries` must be non-empty and chronological.
std::string render_timemap(const CanonicalUri& request_uri, const CanonicalUri& original,
                           const std::string& service_base, const std::string& replay_prefix,
                           const std::vector<MementoResolver::TimemapEntry>& entries);

/// Minimal RFC 7089 link-format parser used for self-checks and tests: yields
/// (uri, attributes) pairs and rejects grammar violations.
struct TimemapLink {
    std::string uri;
    std::vector<std::pair<std::string, std::string>> attributes;

    std::string attribute(const std::string& name) const {
        for (const auto& [key, value] : attributes)
            if (key == name) return value;
        return "";
    }
};
std::vector<TimemapLink> parse_link_format(const std::string& text);

}  // namespace darc::replay
