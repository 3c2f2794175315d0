#pragma once

#include <stdexcept>
#include <string>

namespace darc {

/// Error codes for every failure mode the framework reports.
enum class Errc {
    // address / uri validation
    not_onion,
    bad_length,
    bad_alphabet,
    unsupported_scheme,
    unparseable,
    bad_timestamp,
    // canonicalizer
    out_of_order,
    unknown_uri,
    unknown_collision,
    already_resolved,
    unknown_site,
    conflict,
    // canon service
    bind_failure,
    corrupt_log,
    outcome_mismatch,
    // source ingest
    missing_column,
    no_timestamp,
    // crawler
    proxy_unreachable,
    timeout,
    too_large,
    robots_denied,
    too_many_redirects,
    store_failure,
    // warc store
    io_failure,
    oversize_payload,
    malformed_record,
    digest_mismatch,
    not_captured,
    // replay
    not_in_archive,
    // sim harness
    port_exhausted,
    script_error,
};

/// Stable snake_case name for an error code, used in JSON error bodies.
const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace darc
