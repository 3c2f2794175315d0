#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "darc/canon/types.hpp"

namespace darc::canon {

/// Decision for a pending collision.
struct MergeInto {
    std::string site_id;
};
struct AsNewSite {};
using Resolution = std::variant<MergeInto, AsNewSite>;

/// The onion canonicalizer: ingests observations, resolves site identity,
/// maintains per-site URI-R timelines, parks ambiguous observations as
/// collisions, and answers the three lookup queries.
///
/// Identity resolution order for register_observation:
///   (1) the observed onion address is some site's current address -> Known
///       (aliases merged, current era extended), unless the (source, alias)
///       pair belongs to a different site, which is a collision;
///   (2) address unknown but it matches a retired address of some site ->
///       collision (covers shift-backs and address reuse);
///   (3) address unknown, exact (source, alias) pair known -> Shift;
///       an alias string known only under a different source -> collision;
///   (4) nothing matches -> NewSite.
///
/// Not thread-safe by itself: single logical writer, readers behind the
/// service layer's snapshot locking.
class Engine {
public:
    /// Throws Error{not_onion} for non-onion hosts or empty fields and
    /// Error{out_of_order} when observed_at precedes the latest timestamp of
    /// any matching site.
    RegisterOutcome register_observation(const Observation& obs);

    /// Latest URI-R of the site owning `uri` (current or prior era).
    /// Throws Error{unknown_uri}.
    std::pair<std::string, CanonicalUri> current_uri(const CanonicalUri& uri) const;

    /// Full timeline of the owning site, whichever era was queried.
    /// Throws Error{unknown_uri}.
    const SiteRecord& site_for(const CanonicalUri& uri) const;
    const UriTimeline& timeline_for(const CanonicalUri& uri) const;

    /// Era URI-R whose [first_seen, next.first_seen) interval contains `at`;
    /// clamps to the first/last era outside the observed range.
    /// Throws Error{unknown_uri}.
    CanonicalUri uri_at(const CanonicalUri& uri, const Timestamp14& at) const;

    /// Pending collisions, oldest first.
    std::vector<PendingCollision> list_pending() const;

    /// Applies the held observation per `decision` and marks the collision
    /// resolved. Throws Error{unknown_collision | already_resolved |
    /// unknown_site | out_of_order | conflict}.
    std::string resolve_collision(const std::string& collision_id, const Resolution& decision);

    // Introspection used by services, reports, and tests.
    const std::map<std::string, SiteRecord>& sites() const { return sites_; }
    const std::map<std::string, PendingCollision>& collisions() const { return collisions_; }
    std::vector<ShiftEvent> shift_history() const { return shifts_; }

private:
    std::string next_site_id();
    std::string next_collision_id();
    std::optional<std::string> site_by_current_address(const std::string& label) const;
    std::vector<std::string> sites_by_prior_address(const std::string& label) const;
    std::optional<std::string> site_by_alias(const AliasPair& pair) const;
    std::vector<std::string> sites_by_alias_string(const std::string& alias) const;
    RegisterOutcome apply_new_site(const Observation& obs);
    RegisterOutcome apply_shift(const std::string& site_id, const Observation& obs);
    RegisterOutcome apply_known(const std::string& site_id, const Observation& obs);
    void check_order(const std::vector<std::string>& matched, const Observation& obs) const;

    std::map<std::string, SiteRecord> sites_;             // site_id -> record
    std::map<std::string, std::string> current_address_;  // onion label -> site_id
    std::map<std::string, std::vector<std::string>> prior_address_;  // label -> site_ids
    std::map<AliasPair, std::string> alias_index_;        // exact pair -> site_id
    std::map<std::string, PendingCollision> collisions_;  // collision_id -> record
    std::vector<ShiftEvent> shifts_;
    std::uint64_t site_seq_ = 0;
    std::uint64_t collision_seq_ = 0;
};

}  // namespace darc::canon
