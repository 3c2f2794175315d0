#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "darc/core/onion_address.hpp"

namespace darc {

enum class Scheme { http, https };

const char* scheme_name(Scheme s) noexcept;

/// An absolute http(s) URI in canonical form: lowercase host, default port
/// stripped, no fragment, empty path normalized to "/", query preserved
/// verbatim.
struct CanonicalUri {
    Scheme scheme = Scheme::http;
    std::string host;                         // lowercase; may carry subdomain labels
    std::optional<std::uint16_t> port;        // absent when equal to the scheme default
    std::string path = "/";
    std::optional<std::string> query;         // without the leading '?'

    /// Parses and canonicalizes an absolute http(s) URI.
    /// Throws Error{unsupported_scheme | unparseable}.
    static CanonicalUri parse(const std::string& raw);

    std::string render() const;

    /// The registrable onion address of `host`, when `host` is under .onion.
    std::optional<OnionAddress> onion_host() const;

    /// Same URI with `host` replaced (used for era substitution during
    /// crawling and replay; path/query/scheme/port are preserved).
    CanonicalUri with_host(const std::string& new_host) const;

    /// SURT-style sort key with reversed host labels, e.g.
    /// `http://(onion,bfnews3u2ox4m4ty,)/`. Scheme-distinct by construction.
    std::string surt_key() const;

    bool operator==(const CanonicalUri&) const = default;
    auto operator<=>(const CanonicalUri&) const = default;
};

/// canonicalize_uri from the domain model: identical to CanonicalUri::parse.
inline CanonicalUri canonicalize_uri(const std::string& raw) { return CanonicalUri::parse(raw); }

/// Resolves `reference` against `base` per RFC 3986 §5 (merge + dot-segment
/// removal) and canonicalizes the result.
/// Throws Error{unsupported_scheme | unparseable}.
CanonicalUri resolve_reference(const CanonicalUri& base, const std::string& reference);

}  // namespace darc
