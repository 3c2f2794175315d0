#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "darc/canon/types.hpp"
#include "json.hpp"

namespace darc::canon {

/// One line of the append-only newline-delimited JSON log. Observations and
/// collision resolutions both go through the log so a restart reproduces the
/// full engine state.
struct LogRecord {
    std::uint64_t sequence_no = 0;
    std::string kind;  // "observe" | "resolve"
    std::optional<Observation> observation;       // observe
    std::optional<std::string> collision_id;      // resolve
    std::optional<nlohmann::json> decision;       // resolve
    nlohmann::json outcome;  // recorded result, audited on replay

    nlohmann::json to_json() const;
    static LogRecord from_json(const nlohmann::json& j);
};

class ObservationLog {
public:
    explicit ObservationLog(std::filesystem::path file);

    /// Appends and flushes one record. Throws Error{io_failure}.
    void append(const LogRecord& record);

    /// Reads every record; sequence numbers must be dense from 1.
    /// Throws Error{corrupt_log} naming the bad sequence_no or line.
    std::vector<LogRecord> read_all() const;

    std::uint64_t next_sequence() const { return next_sequence_; }
    const std::filesystem::path& path() const { return file_; }

private:
    std::filesystem::path file_;
    std::ofstream out_;
    std::uint64_t next_sequence_ = 1;
};

}  // namespace darc::canon
