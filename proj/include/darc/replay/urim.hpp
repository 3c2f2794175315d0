#pragma once

#include <string>

#include "darc/core/timestamp.hpp"
#include "darc/core/uri.hpp"

namespace darc::replay {

/// Identifier of an archived capture: `<prefix>/<timestamp>/<absolute-uri>`.
/// Parsing is the exact inverse of rendering.
struct UriM {
    std::string replay_prefix;  // e.g. "/replay"
    Timestamp14 timestamp;
    CanonicalUri target;

    std::string render() const {
        return replay_prefix + "/" + timestamp.value() + "/" + target.render();
    }

    /// Throws Error{unparseable} when `text` is not under `prefix` or the
    /// timestamp/URI parts do not parse.
    static UriM parse(const std::string& text, const std::string& prefix);

    bool operator==(const UriM&) const = default;
};

}  // namespace darc::replay
