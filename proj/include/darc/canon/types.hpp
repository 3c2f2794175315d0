#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "darc/core/timestamp.hpp"
#include "darc/core/uri.hpp"

namespace darc::canon {

/// The 4-tuple a crawl target is tracked by.
struct Observation {
    CanonicalUri uri;        // site root; host must be an onion address
    std::string source;      // list provenance tag, e.g. "github"
    std::string alias;       // human-readable site name, e.g. "Buzzfeed News"
    Timestamp14 observed_at;

    bool operator==(const Observation&) const = default;
};

struct AliasPair {
    std::string source;
    std::string alias;

    auto operator<=>(const AliasPair&) const = default;
};

struct TimelineEntry {
    CanonicalUri uri;
    Timestamp14 first_seen;
    Timestamp14 last_seen;

    bool operator==(const TimelineEntry&) const = default;
};

/// Time-ordered list of URI-R eras for one site ("timemap of URI-Rs").
/// Entries are sorted by first_seen, strictly increasing, and consecutive
/// entries always carry distinct URIs.
struct UriTimeline {
    std::vector<TimelineEntry> entries;

    const TimelineEntry& current() const { return entries.back(); }
    bool operator==(const UriTimeline&) const = default;
};

struct SiteRecord {
    std::string site_id;            // opaque, never changes once issued
    std::set<AliasPair> aliases;
    UriTimeline timeline;

    bool operator==(const SiteRecord&) const = default;
};

struct ShiftEvent {
    std::string site_id;
    CanonicalUri from_uri;
    CanonicalUri to_uri;
    Timestamp14 shifted_at;

    bool operator==(const ShiftEvent&) const = default;
};

enum class CollisionStatus { pending, resolved_merge, resolved_new_site };

/// An observation that changed URI and source/alias simultaneously (or hit a
/// retired URI), parked for a human administrator.
struct PendingCollision {
    std::string collision_id;
    Observation observation;
    std::vector<std::string> candidate_sites;  // possibly empty
    Timestamp14 raised_at;
    CollisionStatus status = CollisionStatus::pending;
    std::optional<std::string> resolved_into;  // site_id for resolved_merge

    bool operator==(const PendingCollision&) const = default;
};

// register_observation outcomes
struct Known {
    std::string site_id;
    bool operator==(const Known&) const = default;
};
struct NewSite {
    std::string site_id;
    bool operator==(const NewSite&) const = default;
};
struct Shift {
    ShiftEvent event;
    bool operator==(const Shift&) const = default;
};
struct Collision {
    std::string collision_id;
    bool operator==(const Collision&) const = default;
};

using RegisterOutcome = std::variant<Known, NewSite, Shift, Collision>;

const char* outcome_kind(const RegisterOutcome& outcome) noexcept;

}  // namespace darc::canon
