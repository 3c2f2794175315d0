#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darc/canon/client.hpp"
#include "darc/warc/cdx.hpp"
#include "json.hpp"

namespace darc::replay {

/// How one memento request was resolved (or why it could not be).
struct ResolveResult {
    std::optional<warc::CdxEntry> entry;  // empty means not in archive
    bool era_substituted = false;          // winner's host differs from the request
    std::vector<std::string> tried;        // era URIs consulted, in order
    nlohmann::json trace;                  // per-stage evidence for /api/v1/lookup
};

/// Resolves memento requests across shifted URI-Rs. Candidate captures come
/// from the request target itself plus every era of the owning site (host
/// substituted, path and query preserved); the capture nearest to the
/// requested time wins, ties toward the earlier timestamp. Without a
/// reachable canonicalizer this degrades to single-URI Wayback semantics.
class MementoResolver {
public:
    MementoResolver(const warc::CdxIndex& index, canon::CanonClient* canon)
        : index_(index), canon_(canon) {}

    ResolveResult resolve(const CanonicalUri& target, const Timestamp14& at) const;

    struct TimemapEntry {
        warc::CdxEntry entry;
    };

    /// Captures of every era of the site owning `target`, chronological.
    /// Degrades to the single queried URI when the canonicalizer is
    /// unavailable. Empty when nothing was ever captured under any era.
    std::vector<TimemapEntry> timemap_entries(const CanonicalUri& target) const;

    /// Current-era URI of `target` (host substituted), or `target` itself in
    /// degraded mode. Used for the rel="original" link.
    CanonicalUri current_original(const CanonicalUri& target) const;

private:
    std::vector<CanonicalUri> era_candidates(const CanonicalUri& target,
                                             const std::optional<Timestamp14>& at,
                                             nlohmann::json* trace) const;

    const warc::CdxIndex& index_;
    canon::CanonClient* canon_;
};

}  // namespace darc::replay
