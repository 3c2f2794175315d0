#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "darc/canon/types.hpp"

namespace darc::canon {

struct TimelineInfo {
    std::string site_id;
    std::vector<AliasPair> aliases;
    std::vector<TimelineEntry> entries;

    const CanonicalUri& first_observed() const { return entries.front().uri; }
    const CanonicalUri& current() const { return entries.back().uri; }
};

/// Lookup surface the crawler and replay service consume. Answers of
/// std::nullopt mean the URI is unknown to the canonicalizer; transport
/// failures throw, letting callers degrade explicitly.
class CanonClient {
public:
    virtual ~CanonClient() = default;

    virtual std::optional<std::pair<std::string, CanonicalUri>> current(
        const CanonicalUri& uri) = 0;
    virtual std::optional<CanonicalUri> at(const CanonicalUri& uri, const Timestamp14& t) = 0;
    virtual std::optional<TimelineInfo> timeline(const CanonicalUri& uri) = 0;
};

/// Client for the canon_service HTTP API.
class HttpCanonClient final : public CanonClient {
public:
    /// base_url like "http://127.0.0.1:8650"
    explicit HttpCanonClient(std::string base_url, int timeout_ms = 3000);

    std::optional<std::pair<std::string, CanonicalUri>> current(const CanonicalUri& uri) override;
    std::optional<CanonicalUri> at(const CanonicalUri& uri, const Timestamp14& t) override;
    std::optional<TimelineInfo> timeline(const CanonicalUri& uri) override;

private:
    std::string get_json(const std::string& path_and_query);

    std::string base_url_;
    int timeout_ms_;
};

}  // namespace darc::canon
