#pragma once

#include <compare>
#include <string>

namespace darc {

enum class OnionVersion { v2, v3 };

/// A validated `.onion` hostname: the lowercase base32 label plus its
/// protocol version. v2 labels are 16 characters, v3 labels are 56. Subdomain
/// labels that precede the registrable onion label are not part of the
/// address.
class OnionAddress {
public:
    /// Validates `hostname` (case-insensitive, subdomains permitted) and
    /// extracts the registrable onion label.
    /// Throws Error{not_onion | bad_length | bad_alphabet}.
    static OnionAddress validate(const std::string& hostname);

    /// True iff validate() would succeed.
    static bool is_valid(const std::string& hostname) noexcept;

    const std::string& label() const noexcept { return label_; }
    OnionVersion version() const noexcept { return version_; }

    /// Rendered form, always `<label>.onion`.
    std::string hostname() const { return label_ + ".onion"; }

    auto operator<=>(const OnionAddress&) const = default;

private:
    OnionAddress(std::string label, OnionVersion version)
        : label_(std::move(label)), version_(version) {}

    std::string label_;
    OnionVersion version_;
};

}  // namespace darc
