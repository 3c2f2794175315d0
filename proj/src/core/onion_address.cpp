#include "darc/core/onion_address.hpp"

#include <algorithm>
#include <cctype>

#include "darc/error.hpp"

namespace darc {

namespace {

const std::string kSuffix = ".onion";

bool base32_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '2' && c <= '7');
}

}  // namespace

OnionAddress OnionAddress::validate(const std::string& hostname) {
    std::string lower = hostname;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });

    if (lower.size() <= kSuffix.size() ||
        lower.compare(lower.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
        // ".onion" alone has an empty label and is handled as bad_length below,
        // everything without the suffix is not an onion name at all.
        if (lower != kSuffix) raise(Errc::not_onion, "no .onion suffix: " + hostname);
    }

    std::string stem = lower.substr(0, lower.size() - kSuffix.size());
    // Subdomain labels before the registrable onion label are allowed.
    auto dot = stem.rfind('.');
    std::string label = dot == std::string::npos ? stem : stem.substr(dot + 1);

    if (label.size() != 16 && label.size() != 56)
        raise(Errc::bad_length,
              "onion label must be 16 or 56 characters, got " + std::to_string(label.size()));
    for (char c : label) {
        if (!base32_char(c))
            raise(Errc::bad_alphabet, std::string("character outside [a-z2-7]: '") + c + "'");
    }
    return OnionAddress(std::move(label), label.size() == 16 ? OnionVersion::v2 : OnionVersion::v3);
}

bool OnionAddress::is_valid(const std::string& hostname) noexcept {
    try {
        validate(hostname);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace darc
