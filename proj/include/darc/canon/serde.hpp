#pragma once

#include "darc/canon/engine.hpp"
#include "darc/canon/types.hpp"
#include "json.hpp"

namespace darc::canon {

nlohmann::json to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RegisterOutcome& outcome);

nlohmann::json to_json(const PendingCollision& collision);

/// The /api/v1/timeline response shape.
nlohmann::json timeline_json(const SiteRecord& site);

}  // namespace darc::canon
