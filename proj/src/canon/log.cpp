#include "darc/canon/log.hpp"

#include "darc/canon/serde.hpp"
#include "darc/error.hpp"

namespace darc::canon {

using nlohmann::json;

json LogRecord::to_json() const {
    json j{{"sequence_no", sequence_no}, {"kind", kind}, {"outcome", outcome}};
    if (observation) j["observation"] = canon::to_json(*observation);
    if (collision_id) j["collision_id"] = *collision_id;
    if (decision) j["decision"] = *decision;
    return j;
}

LogRecord LogRecord::from_json(const json& j) {
    LogRecord record;
    record.sequence_no = j.at("sequence_no").get<std::uint64_t>();
    record.kind = j.at("kind").get<std::string>();
    record.outcome = j.at("outcome");
    if (j.contains("observation"))
        record.observation = observation_from_json(j.at("observation"));
    if (j.contains("collision_id"))
        record.collision_id = j.at("collision_id").get<std::string>();
    if (j.contains("decision")) record.decision = j.at("decision");
    if (record.kind == "observe" && !record.observation)
        raise(Errc::corrupt_log,
              "observe record without observation at sequence_no " +
                  std::to_string(record.sequence_no));
    if (record.kind == "resolve" && (!record.collision_id || !record.decision))
        raise(Errc::corrupt_log,
              "resolve record missing fields at sequence_no " +
                  std::to_string(record.sequence_no));
    return record;
}

ObservationLog::ObservationLog(std::filesystem::path file) : file_(std::move(file)) {
    // establish the next sequence number from what's already there
    if (std::filesystem::exists(file_)) {
        auto existing = read_all();
        next_sequence_ = existing.size() + 1;
    }
    out_.open(file_, std::ios::app);
    if (!out_) raise(Errc::io_failure, "cannot open log for append: " + file_.string());
}

void ObservationLog::append(const LogRecord& record) {
    out_ << record.to_json().dump() << '\n';
    out_.flush();
    if (!out_) raise(Errc::io_failure, "log append failed: " + file_.string());
    next_sequence_ = record.sequence_no + 1;
}

std::vector<LogRecord> ObservationLog::read_all() const {
    std::vector<LogRecord> records;
    std::ifstream in(file_);
    if (!in) return records;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        LogRecord record;
        try {
            record = LogRecord::from_json(json::parse(line));
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            raise(Errc::corrupt_log,
                  "unreadable log line " + std::to_string(line_no) + ": " + e.what());
        }
        if (record.sequence_no != records.size() + 1)
            raise(Errc::corrupt_log, "sequence gap at sequence_no " +
                                         std::to_string(record.sequence_no) + " (expected " +
                                         std::to_string(records.size() + 1) + ")");
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace darc::canon
