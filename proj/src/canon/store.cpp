#include "darc/canon/store.hpp"

#include "darc/canon/serde.hpp"
#include "darc/error.hpp"

namespace darc::canon {

namespace {

Resolution resolution_from_json(const nlohmann::json& j) {
    std::string decision = j.at("decision").get<std::string>();
    if (decision == "new_site") return AsNewSite{};
    if (decision == "merge_into") return MergeInto{j.at("site_id").get<std::string>()};
    raise(Errc::unparseable, "decision must be merge_into or new_site");
}

}  // namespace

Engine replay_log(const std::vector<LogRecord>& records) {
    Engine engine;
    for (const auto& record : records) {
        nlohmann::json recomputed;
        if (record.kind == "observe") {
            recomputed = to_json(engine.register_observation(*record.observation));
        } else if (record.kind == "resolve") {
            auto site_id =
                engine.resolve_collision(*record.collision_id,
                                         resolution_from_json(*record.decision));
            recomputed = nlohmann::json{{"site_id", site_id}};
        } else {
            raise(Errc::corrupt_log, "unknown record kind '" + record.kind +
                                         "' at sequence_no " +
                                         std::to_string(record.sequence_no));
        }
        if (recomputed != record.outcome)
            raise(Errc::outcome_mismatch,
                  "recorded outcome diverges from recomputed at sequence_no " +
                      std::to_string(record.sequence_no) + ": recorded " +
                      record.outcome.dump() + ", recomputed " + recomputed.dump());
    }
    return engine;
}

CanonStore::CanonStore(const std::filesystem::path& data_dir)
    : log_((std::filesystem::create_directories(data_dir),
            data_dir / "observations.ndjson")) {
    engine_ = replay_log(log_.read_all());
}

RegisterOutcome CanonStore::observe(const Observation& obs) {
    std::unique_lock lock(mutex_);
    RegisterOutcome outcome = engine_.register_observation(obs);
    LogRecord record;
    record.sequence_no = log_.next_sequence();
    record.kind = "observe";
    record.observation = obs;
    record.outcome = to_json(outcome);
    log_.append(record);
    return outcome;
}

std::string CanonStore::resolve(const std::string& collision_id, const Resolution& decision) {
    std::unique_lock lock(mutex_);
    std::string site_id = engine_.resolve_collision(collision_id, decision);
    LogRecord record;
    record.sequence_no = log_.next_sequence();
    record.kind = "resolve";
    record.collision_id = collision_id;
    if (std::holds_alternative<AsNewSite>(decision)) {
        record.decision = nlohmann::json{{"decision", "new_site"}};
    } else {
        record.decision = nlohmann::json{{"decision", "merge_into"},
                                         {"site_id", std::get<MergeInto>(decision).site_id}};
    }
    record.outcome = nlohmann::json{{"site_id", site_id}};
    log_.append(record);
    return site_id;
}

std::uint64_t CanonStore::log_size() const {
    std::shared_lock lock(mutex_);
    return log_.next_sequence() - 1;
}

}  // namespace darc::canon
