#pragma once

#include <filesystem>
#include <mutex>
#include <shared_mutex>

#include "darc/canon/engine.hpp"
#include "darc/canon/log.hpp"

namespace darc::canon {

/// Rebuilds an engine by re-applying logged operations in order. Recorded
/// outcomes are audited against recomputed ones; any divergence means the log
/// was tampered with or the rules changed underneath it.
/// Throws Error{outcome_mismatch} naming the sequence_no.
Engine replay_log(const std::vector<LogRecord>& records);

/// The durable canonicalizer: engine state backed by an append-only log.
/// Single logical writer (observe/resolve serialize on an exclusive lock),
/// concurrent readers see consistent snapshots.
class CanonStore {
public:
    /// Opens (or creates) `data_dir` and replays the existing log.
    /// Throws Error{corrupt_log | outcome_mismatch}.
    explicit CanonStore(const std::filesystem::path& data_dir);

    RegisterOutcome observe(const Observation& obs);
    std::string resolve(const std::string& collision_id, const Resolution& decision);

    /// Read access under a shared lock.
    template <typename Fn>
    auto read(Fn&& fn) const {
        std::shared_lock lock(mutex_);
        return fn(engine_);
    }

    std::uint64_t log_size() const;

private:
    mutable std::shared_mutex mutex_;
    Engine engine_;
    ObservationLog log_;
};

}  // namespace darc::canon
