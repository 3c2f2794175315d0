#include "darc/core/uri.hpp"

#include <algorithm>
#include <cctype>

#include "darc/error.hpp"

namespace darc {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool scheme_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::uint16_t default_port(Scheme s) {
    return s == Scheme::http ? 80 : 443;
}

// RFC 3986 §5.2.4
std::string remove_dot_segments(const std::string& path) {
    std::string input = path;
    std::string output;
    while (!input.empty()) {
        if (input.rfind("../", 0) == 0) {
            input.erase(0, 3);
        } else if (input.rfind("./", 0) == 0) {
            input.erase(0, 2);
        } else if (input.rfind("/./", 0) == 0) {
            input.erase(0, 2);  // "/./x" -> "/x"
        } else if (input == "/.") {
            input = "/";
        } else if (input.rfind("/../", 0) == 0 || input == "/..") {
            input.erase(0, 3);
            if (input.empty()) input = "/";
            auto slash = output.rfind('/');
            output.erase(slash == std::string::npos ? 0 : slash);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            auto next = input.find('/', 1);
            output += input.substr(0, next);
            input.erase(0, next == std::string::npos ? input.size() : next);
        }
    }
    return output;
}

struct SplitRef {
    std::string path;
    std::optional<std::string> query;
};

// Splits "path?query#frag" into path and query, dropping any fragment.
SplitRef split_path_query(const std::string& s) {
    SplitRef out;
    auto frag = s.find('#');
    std::string base = frag == std::string::npos ? s : s.substr(0, frag);
    auto q = base.find('?');
    if (q == std::string::npos) {
        out.path = base;
    } else {
        out.path = base.substr(0, q);
        out.query = base.substr(q + 1);
    }
    return out;
}

}  // namespace

const char* scheme_name(Scheme s) noexcept {
    return s == Scheme::http ? "http" : "https";
}

CanonicalUri CanonicalUri::parse(const std::string& raw) {
    auto sep = raw.find("://");
    if (sep == std::string::npos || sep == 0)
        raise(Errc::unparseable, "not an absolute URI: " + raw);
    for (std::size_t i = 0; i < sep; ++i) {
        if (!scheme_char(raw[i])) raise(Errc::unparseable, "bad scheme in: " + raw);
    }
    std::string scheme = to_lower(raw.substr(0, sep));
    CanonicalUri uri;
    if (scheme == "http") {
        uri.scheme = Scheme::http;
    } else if (scheme == "https") {
        uri.scheme = Scheme::https;
    } else {
        raise(Errc::unsupported_scheme, "unsupported scheme '" + scheme + "' in: " + raw);
    }

    std::size_t auth_start = sep + 3;
    std::size_t auth_end = raw.find_first_of("/?#", auth_start);
    std::string authority = raw.substr(
        auth_start, auth_end == std::string::npos ? std::string::npos : auth_end - auth_start);

    // Userinfo is dropped during canonicalization.
    auto at = authority.rfind('@');
    if (at != std::string::npos) authority = authority.substr(at + 1);
    if (authority.empty()) raise(Errc::unparseable, "empty host in: " + raw);

    std::string host;
    std::string port_text;
    if (authority[0] == '[') {
        auto close = authority.find(']');
        if (close == std::string::npos) raise(Errc::unparseable, "unterminated IPv6 host: " + raw);
        host = authority.substr(0, close + 1);
        if (close + 1 < authority.size()) {
            if (authority[close + 1] != ':')
                raise(Errc::unparseable, "junk after IPv6 host: " + raw);
            port_text = authority.substr(close + 2);
        }
    } else {
        auto colon = authority.find(':');
        if (colon == std::string::npos) {
            host = authority;
        } else {
            host = authority.substr(0, colon);
            port_text = authority.substr(colon + 1);
        }
    }
    if (host.empty()) raise(Errc::unparseable, "empty host in: " + raw);
    for (char c : host) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '/' || c == '\\')
            raise(Errc::unparseable, "bad host character in: " + raw);
    }
    uri.host = to_lower(host);

    if (!port_text.empty()) {
        long value = 0;
        for (char c : port_text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                raise(Errc::unparseable, "non-numeric port in: " + raw);
            value = value * 10 + (c - '0');
            if (value > 65535) raise(Errc::unparseable, "port out of range in: " + raw);
        }
        if (value == 0) raise(Errc::unparseable, "port out of range in: " + raw);
        if (value != default_port(uri.scheme)) uri.port = static_cast<std::uint16_t>(value);
    }

    if (auth_end == std::string::npos || raw[auth_end] == '#') {
        uri.path = "/";
        return uri;
    }
    SplitRef rest = split_path_query(raw.substr(auth_end));
    uri.path = rest.path.empty() ? "/" : rest.path;
    uri.query = rest.query;
    return uri;
}

std::string CanonicalUri::render() const {
    std::string out = scheme_name(scheme);
    out += "://";
    out += host;
    if (port) {
        out += ':';
        out += std::to_string(*port);
    }
    out += path;
    if (query) {
        out += '?';
        out += *query;
    }
    return out;
}

std::optional<OnionAddress> CanonicalUri::onion_host() const {
    if (!OnionAddress::is_valid(host)) return std::nullopt;
    return OnionAddress::validate(host);
}

CanonicalUri CanonicalUri::with_host(const std::string& new_host) const {
    CanonicalUri out = *this;
    out.host = to_lower(new_host);
    return out;
}

std::string CanonicalUri::surt_key() const {
    std::string out = scheme_name(scheme);
    out += "://(";
    // Reverse the dot-separated host labels: a.b.onion -> onion,b,a,
    std::string labels = host;
    while (!labels.empty()) {
        auto dot = labels.rfind('.');
        if (dot == std::string::npos) {
            out += labels;
            labels.clear();
        } else {
            out += labels.substr(dot + 1);
            labels.erase(dot);
        }
        out += ',';
    }
    if (port) {
        out += ':';
        out += std::to_string(*port);
    }
    out += ')';
    out += path;
    if (query) {
        out += '?';
        out += *query;
    }
    return out;
}

CanonicalUri resolve_reference(const CanonicalUri& base, const std::string& reference) {
    if (reference.empty() || reference[0] == '#') return base;

    // Absolute reference with a scheme?
    std::size_t i = 0;
    if (std::isalpha(static_cast<unsigned char>(reference[0]))) {
        while (i < reference.size() && scheme_char(reference[i])) ++i;
        if (i < reference.size() && reference[i] == ':') {
            std::string scheme = to_lower(reference.substr(0, i));
            if (scheme != "http" && scheme != "https")
                raise(Errc::unsupported_scheme, "unsupported scheme in reference: " + reference);
            return CanonicalUri::parse(reference);
        }
    }

    if (reference.rfind("//", 0) == 0) {
        // Network-path reference inherits the base scheme.
        return CanonicalUri::parse(std::string(scheme_name(base.scheme)) + ":" + reference);
    }

    CanonicalUri out = base;
    out.query.reset();
    SplitRef ref = split_path_query(reference);

    if (ref.path.empty()) {
        // Query-only reference keeps the base path.
        out.path = base.path;
        out.query = ref.query;
        return out;
    }
    if (ref.path[0] == '/') {
        out.path = remove_dot_segments(ref.path);
    } else {
        // Merge with all but the last segment of the base path.
        auto slash = base.path.rfind('/');
        std::string merged =
            slash == std::string::npos ? "/" + ref.path : base.path.substr(0, slash + 1) + ref.path;
        out.path = remove_dot_segments(merged);
    }
    if (out.path.empty()) out.path = "/";
    out.query = ref.query;
    return out;
}

}  // namespace darc
