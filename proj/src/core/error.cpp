#include "darc/error.hpp"

namespace darc {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::not_onion: return "not_onion";
        case Errc::bad_length: return "bad_length";
        case Errc::bad_alphabet: return "bad_alphabet";
        case Errc::unsupported_scheme: return "unsupported_scheme";
        case Errc::unparseable: return "unparseable";
        case Errc::bad_timestamp: return "bad_timestamp";
        case Errc::out_of_order: return "out_of_order";
        case Errc::unknown_uri: return "unknown_uri";
        case Errc::unknown_collision: return "unknown_collision";
        case Errc::already_resolved: return "already_resolved";
        case Errc::unknown_site: return "unknown_site";
        case Errc::conflict: return "conflict";
        case Errc::bind_failure: return "bind_failure";
        case Errc::corrupt_log: return "corrupt_log";
        case Errc::outcome_mismatch: return "outcome_mismatch";
        case Errc::missing_column: return "missing_column";
        case Errc::no_timestamp: return "no_timestamp";
        case Errc::proxy_unreachable: return "proxy_unreachable";
        case Errc::timeout: return "timeout";
        case Errc::too_large: return "too_large";
        case Errc::robots_denied: return "robots_denied";
        case Errc::too_many_redirects: return "too_many_redirects";
        case Errc::store_failure: return "store_failure";
        case Errc::io_failure: return "io_failure";
        case Errc::oversize_payload: return "oversize_payload";
        case Errc::malformed_record: return "malformed_record";
        case Errc::digest_mismatch: return "digest_mismatch";
        case Errc::not_captured: return "not_captured";
        case Errc::not_in_archive: return "not_in_archive";
        case Errc::port_exhausted: return "port_exhausted";
        case Errc::script_error: return "script_error";
    }
    return "unknown";
}

}  // namespace darc
