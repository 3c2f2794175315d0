#include "darc/canon/serde.hpp"

#include "darc/error.hpp"

namespace darc::canon {

using nlohmann::json;

json to_json(const Observation& obs) {
    return json{{"uri", obs.uri.render()},
                {"source", obs.source},
                {"alias", obs.alias},
                {"observed_at", obs.observed_at.value()}};
}

Observation observation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("uri") || !j.contains("source") || !j.contains("alias") ||
        !j.contains("observed_at"))
        raise(Errc::unparseable, "observation needs uri, source, alias, observed_at");
    Observation obs;
    obs.uri = canonicalize_uri(j.at("uri").get<std::string>());
    obs.source = j.at("source").get<std::string>();
    obs.alias = j.at("alias").get<std::string>();
    obs.observed_at = Timestamp14::parse(j.at("observed_at").get<std::string>());
    return obs;
}

json to_json(const RegisterOutcome& outcome) {
    if (const auto* known = std::get_if<Known>(&outcome))
        return json{{"outcome", "known"}, {"site_id", known->site_id}};
    if (const auto* fresh = std::get_if<NewSite>(&outcome))
        return json{{"outcome", "new_site"}, {"site_id", fresh->site_id}};
    if (const auto* shift = std::get_if<Shift>(&outcome))
        return json{{"outcome", "shift"},
                    {"site_id", shift->event.site_id},
                    {"from_uri", shift->event.from_uri.render()},
                    {"to_uri", shift->event.to_uri.render()},
                    {"shifted_at", shift->event.shifted_at.value()}};
    const auto& collision = std::get<Collision>(outcome);
    return json{{"outcome", "collision"}, {"collision_id", collision.collision_id}};
}

json to_json(const PendingCollision& collision) {
    const char* status = "pending";
    if (collision.status == CollisionStatus::resolved_merge) status = "resolved_merge";
    if (collision.status == CollisionStatus::resolved_new_site) status = "resolved_new_site";
    json j{{"collision_id", collision.collision_id},
           {"observation", to_json(collision.observation)},
           {"candidate_sites", collision.candidate_sites},
           {"raised_at", collision.raised_at.value()},
           {"status", status}};
    if (collision.resolved_into) j["resolved_into"] = *collision.resolved_into;
    return j;
}

json timeline_json(const SiteRecord& site) {
    json aliases = json::array();
    for (const auto& pair : site.aliases)
        aliases.push_back(json{{"source", pair.source}, {"alias", pair.alias}});
    json timeline = json::array();
    for (const auto& entry : site.timeline.entries)
        timeline.push_back(json{{"uri", entry.uri.render()},
                                {"first_seen", entry.first_seen.value()},
                                {"last_seen", entry.last_seen.value()}});
    return json{{"site_id", site.site_id}, {"aliases", aliases}, {"timeline", timeline}};
}

}  // namespace darc::canon
