#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

#include "darc/core/timestamp.hpp"

namespace darc {

/// Source of capture timestamps. Production uses the system UTC clock; the
/// sim harness injects a virtual clock so month-long scenarios compress to
/// seconds without touching WARC-Date semantics.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp14 now14() const = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp14 now14() const override {
        return Timestamp14::from_time(std::chrono::system_clock::now());
    }
};

/// Settable clock driven by scenario scripts.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(Timestamp14 start = Timestamp14())
        : seconds_(start.epoch_seconds()) {}

    Timestamp14 now14() const override {
        return Timestamp14::from_epoch_seconds(seconds_.load(std::memory_order_relaxed));
    }

    void set(const Timestamp14& t) {
        seconds_.store(t.epoch_seconds(), std::memory_order_relaxed);
    }

    void advance_seconds(std::int64_t delta) {
        seconds_.fetch_add(delta, std::memory_order_relaxed);
    }

private:
    std::atomic<std::int64_t> seconds_;
};

}  // namespace darc
