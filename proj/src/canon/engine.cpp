#include "darc/canon/engine.hpp"

#include <algorithm>
#include <cstdio>

#include "darc/error.hpp"

namespace darc::canon {

namespace {

std::string format_id(const char* prefix, std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%06llu", prefix, static_cast<unsigned long long>(n));
    return buf;
}

std::string require_onion_label(const Observation& obs) {
    if (obs.source.empty() || obs.alias.empty())
        raise(Errc::unparseable, "observation source/alias must be non-empty");
    auto onion = obs.uri.onion_host();
    if (!onion) raise(Errc::not_onion, "observation host is not an onion address: " + obs.uri.host);
    return onion->label();
}

}  // namespace

const char* outcome_kind(const RegisterOutcome& outcome) noexcept {
    switch (outcome.index()) {
        case 0: return "known";
        case 1: return "new_site";
        case 2: return "shift";
        default: return "collision";
    }
}

std::string Engine::next_site_id() { return format_id("s", ++site_seq_); }
std::string Engine::next_collision_id() { return format_id("c", ++collision_seq_); }

std::optional<std::string> Engine::site_by_current_address(const std::string& label) const {
    auto it = current_address_.find(label);
    if (it == current_address_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Engine::sites_by_prior_address(const std::string& label) const {
    auto it = prior_address_.find(label);
    if (it == prior_address_.end()) return {};
    return it->second;
}

std::optional<std::string> Engine::site_by_alias(const AliasPair& pair) const {
    auto it = alias_index_.find(pair);
    if (it == alias_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Engine::sites_by_alias_string(const std::string& alias) const {
    std::vector<std::string> out;
    for (const auto& [pair, site_id] : alias_index_) {
        if (pair.alias == alias) out.push_back(site_id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void Engine::check_order(const std::vector<std::string>& matched, const Observation& obs) const {
    for (const auto& site_id : matched) {
        const SiteRecord& site = sites_.at(site_id);
        const Timestamp14& latest = site.timeline.current().last_seen;
        if (obs.observed_at < latest)
            raise(Errc::out_of_order, "observation at " + obs.observed_at.value() +
                                          " precedes latest ingest " + latest.value() +
                                          " of site " + site_id);
    }
}

RegisterOutcome Engine::register_observation(const Observation& obs) {
    const std::string label = require_onion_label(obs);
    const AliasPair pair{obs.source, obs.alias};

    auto current_match = site_by_current_address(label);
    auto prior_matches = sites_by_prior_address(label);
    auto pair_match = site_by_alias(pair);
    auto alias_matches = sites_by_alias_string(obs.alias);

    std::vector<std::string> matched = prior_matches;
    if (current_match) matched.push_back(*current_match);
    if (pair_match) matched.push_back(*pair_match);
    matched.insert(matched.end(), alias_matches.begin(), alias_matches.end());
    std::sort(matched.begin(), matched.end());
    matched.erase(std::unique(matched.begin(), matched.end()), matched.end());
    check_order(matched, obs);

    // (1) current address known
    if (current_match) {
        if (pair_match && *pair_match != *current_match) {
            // URI says one site, (source, alias) says another.
            std::vector<std::string> candidates{*current_match, *pair_match};
            std::sort(candidates.begin(), candidates.end());
            PendingCollision collision{next_collision_id(), obs, candidates, obs.observed_at,
                                   CollisionStatus::pending, std::nullopt};
            collisions_.emplace(collision.collision_id, collision);
            return Collision{collision.collision_id};
        }
        return apply_known(*current_match, obs);
    }

    // (4a) address seen before but retired: shift-back or address reuse.
    if (!prior_matches.empty()) {
        std::vector<std::string> candidates = prior_matches;
        if (pair_match) candidates.push_back(*pair_match);
        candidates.insert(candidates.end(), alias_matches.begin(), alias_matches.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        PendingCollision collision{next_collision_id(), obs, candidates, obs.observed_at,
                                   CollisionStatus::pending, std::nullopt};
        collisions_.emplace(collision.collision_id, collision);
        return Collision{collision.collision_id};
    }

    // (2) fresh address, exact (source, alias) pair known
    if (pair_match) return apply_shift(*pair_match, obs);

    // (4b) alias string known only under other sources: ambiguous.
    if (!alias_matches.empty()) {
        PendingCollision collision{next_collision_id(), obs, alias_matches, obs.observed_at,
                                   CollisionStatus::pending, std::nullopt};
        collisions_.emplace(collision.collision_id, collision);
        return Collision{collision.collision_id};
    }

    // (3) nothing matches
    return apply_new_site(obs);
}

RegisterOutcome Engine::apply_known(const std::string& site_id, const Observation& obs) {
    SiteRecord& site = sites_.at(site_id);
    const AliasPair pair{obs.source, obs.alias};
    if (site.aliases.insert(pair).second) alias_index_[pair] = site_id;
    TimelineEntry& current = site.timeline.entries.back();
    if (current.last_seen < obs.observed_at) current.last_seen = obs.observed_at;
    return Known{site_id};
}

RegisterOutcome Engine::apply_shift(const std::string& site_id, const Observation& obs) {
    SiteRecord& site = sites_.at(site_id);
    TimelineEntry& current = site.timeline.entries.back();
    ShiftEvent event{site_id, current.uri, obs.uri, obs.observed_at};

    const std::string old_label = current.uri.onion_host()->label();
    prior_address_[old_label].push_back(site_id);
    current_address_.erase(old_label);
    current_address_[obs.uri.onion_host()->label()] = site_id;

    // The retired era keeps its existing last_seen: there is no evidence the
    // old URI survived past its last sighting.
    site.timeline.entries.push_back({obs.uri, obs.observed_at, obs.observed_at});
    shifts_.push_back(event);
    return Shift{event};
}

RegisterOutcome Engine::apply_new_site(const Observation& obs) {
    SiteRecord site;
    site.site_id = next_site_id();
    site.aliases.insert({obs.source, obs.alias});
    site.timeline.entries.push_back({obs.uri, obs.observed_at, obs.observed_at});
    current_address_[obs.uri.onion_host()->label()] = site.site_id;
    alias_index_[{obs.source, obs.alias}] = site.site_id;
    const std::string id = site.site_id;
    sites_.emplace(id, std::move(site));
    return NewSite{id};
}

const SiteRecord& Engine::site_for(const CanonicalUri& uri) const {
    auto onion = uri.onion_host();
    if (!onion) raise(Errc::unknown_uri, "not an onion URI: " + uri.render());
    const std::string label = onion->label();

    if (auto site_id = site_by_current_address(label)) return sites_.at(*site_id);

    auto priors = sites_by_prior_address(label);
    if (priors.empty()) raise(Errc::unknown_uri, "never observed: " + uri.render());
    if (priors.size() == 1) return sites_.at(priors.front());

    // Several sites have retired this address over time; answer for the most
    // recent owner of the label.
    const SiteRecord* best = nullptr;
    Timestamp14 best_end;
    for (const auto& site_id : priors) {
        const SiteRecord& site = sites_.at(site_id);
        for (const auto& entry : site.timeline.entries) {
            auto h = entry.uri.onion_host();
            if (h && h->label() == label && (!best || best_end < entry.last_seen)) {
                best = &site;
                best_end = entry.last_seen;
            }
        }
    }
    return *best;
}

std::pair<std::string, CanonicalUri> Engine::current_uri(const CanonicalUri& uri) const {
    const SiteRecord& site = site_for(uri);
    return {site.site_id, site.timeline.current().uri};
}

const UriTimeline& Engine::timeline_for(const CanonicalUri& uri) const {
    return site_for(uri).timeline;
}

CanonicalUri Engine::uri_at(const CanonicalUri& uri, const Timestamp14& at) const {
    const UriTimeline& timeline = timeline_for(uri);
    const TimelineEntry* chosen = &timeline.entries.front();
    for (const auto& entry : timeline.entries) {
        if (entry.first_seen <= at) chosen = &entry;
    }
    return chosen->uri;
}

std::vector<PendingCollision> Engine::list_pending() const {
    std::vector<PendingCollision> out;
    for (const auto& [id, collision] : collisions_) {
        if (collision.status == CollisionStatus::pending) out.push_back(collision);
    }
    std::sort(out.begin(), out.end(), [](const PendingCollision& a, const PendingCollision& b) {
        return std::tie(a.raised_at, a.collision_id) < std::tie(b.raised_at, b.collision_id);
    });
    return out;
}

std::string Engine::resolve_collision(const std::string& collision_id,
                                      const Resolution& decision) {
    auto it = collisions_.find(collision_id);
    if (it == collisions_.end()) raise(Errc::unknown_collision, "no collision " + collision_id);
    PendingCollision& collision = it->second;
    if (collision.status != CollisionStatus::pending)
        raise(Errc::already_resolved, "collision " + collision_id + " already resolved");

    const Observation& obs = collision.observation;
    const std::string label = obs.uri.onion_host()->label();
    const AliasPair pair{obs.source, obs.alias};

    if (std::holds_alternative<AsNewSite>(decision)) {
        if (site_by_current_address(label))
            raise(Errc::conflict, "address " + label + ".onion is currently owned by site " +
                                      *site_by_current_address(label));
        if (auto owner = site_by_alias(pair); owner)
            raise(Errc::conflict, "(source, alias) already belongs to site " + *owner);
        for (const auto& site_id : sites_by_prior_address(label)) {
            for (const auto& entry : sites_.at(site_id).timeline.entries) {
                auto h = entry.uri.onion_host();
                if (h && h->label() == label && obs.observed_at < entry.last_seen)
                    raise(Errc::conflict, "address interval would overlap site " + site_id);
            }
        }
        auto outcome = apply_new_site(obs);
        collision.status = CollisionStatus::resolved_new_site;
        return std::get<NewSite>(outcome).site_id;
    }

    const std::string& target = std::get<MergeInto>(decision).site_id;
    auto site_it = sites_.find(target);
    if (site_it == sites_.end()) raise(Errc::unknown_site, "no site " + target);
    SiteRecord& site = site_it->second;

    if (auto owner = site_by_alias(pair); owner && *owner != target)
        raise(Errc::conflict, "(source, alias) already belongs to site " + *owner);

    auto current_owner = site_by_current_address(label);
    if (current_owner && *current_owner != target)
        raise(Errc::conflict, "address is the current URI of site " + *current_owner);

    if (current_owner && *current_owner == target) {
        // URI matches the target's current era: merge as Known.
        apply_known(target, obs);
        collision.status = CollisionStatus::resolved_merge;
        collision.resolved_into = target;
        return target;
    }

    // Apply as a shift onto the named site.
    if (!(site.timeline.current().first_seen < obs.observed_at) ||
        obs.observed_at < site.timeline.current().last_seen)
        raise(Errc::out_of_order, "held observation does not postdate site " + target +
                                      "'s current era");
    for (const auto& site_id : sites_by_prior_address(label)) {
        if (site_id == target) continue;
        for (const auto& entry : sites_.at(site_id).timeline.entries) {
            auto h = entry.uri.onion_host();
            if (h && h->label() == label && obs.observed_at < entry.last_seen)
                raise(Errc::conflict, "address interval would overlap site " + site_id);
        }
    }
    if (site.aliases.insert(pair).second) alias_index_[pair] = target;
    apply_shift(target, obs);
    collision.status = CollisionStatus::resolved_merge;
    collision.resolved_into = target;
    return target;
}

}  // namespace darc::canon
