#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace darc {

/// A 14-digit GMT datetime, `YYYYMMDDHHMMSS`, the single time format used
/// across observations, CDX lines, and replay URLs. Lexicographic ordering of
/// the rendered value equals chronological ordering.
class Timestamp14 {
public:
    Timestamp14() : value_("19700101000000") {}

    /// Parses and validates a 14-digit GMT calendar datetime.
    /// Throws Error{bad_timestamp} on anything else.
    static Timestamp14 parse(const std::string& text);

    static Timestamp14 from_time(std::chrono::system_clock::time_point tp);
    static Timestamp14 from_epoch_seconds(std::int64_t seconds);

    const std::string& value() const noexcept { return value_; }

    std::int64_t epoch_seconds() const;
    std::chrono::system_clock::time_point to_time() const;

    /// `Sun, 06 Nov 1994 08:49:37 GMT` — used for Memento-Datetime headers.
    std::string rfc1123() const;
    /// `1994-11-06T08:49:37Z` — used for WARC-Date.
    std::string iso8601() const;

    auto operator<=>(const Timestamp14&) const = default;

private:
    explicit Timestamp14(std::string value) : value_(std::move(value)) {}
    std::string value_;
};

}  // namespace darc
