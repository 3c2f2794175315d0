#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace darc::warc {

/// SHA-1 (FIPS 180-1). WARC payload digests use SHA-1 in base32 by archival
/// convention; this is an integrity label, not a security boundary.
class Sha1 {
public:
    Sha1() { reset(); }

    void reset();
    void update(std::span<const std::uint8_t> data);
    void update(const std::string& data);
    std::array<std::uint8_t, 20> finish();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t h_[5];
    std::uint64_t length_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
};

std::array<std::uint8_t, 20> sha1(std::span<const std::uint8_t> data);

/// RFC 4648 base32, uppercase. A 20-byte digest encodes to exactly 32
/// characters, so no padding is emitted.
std::string base32_encode(std::span<const std::uint8_t> data);

/// `sha1:<base32>` as used in WARC-Payload-Digest / WARC-Block-Digest.
std::string warc_digest_label(std::span<const std::uint8_t> data);
std::string warc_digest_label(const std::string& data);

}  // namespace darc::warc
