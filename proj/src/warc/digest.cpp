#include "darc/warc/digest.hpp"

#include <cstring>

namespace darc::warc {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int n) {
    return (x << n) | (x >> (32 - n));
}

}  // namespace

void Sha1::reset() {
    h_[0] = 0x67452301u;
    h_[1] = 0xEFCDAB89u;
    h_[2] = 0x98BADCFEu;
    h_[3] = 0x10325476u;
    h_[4] = 0xC3D2E1F0u;
    length_ = 0;
    buffered_ = 0;
}

void Sha1::process_block(const std::uint8_t* block) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
        w[i] = (std::uint32_t(block[i * 4]) << 24) | (std::uint32_t(block[i * 4 + 1]) << 16) |
               (std::uint32_t(block[i * 4 + 2]) << 8) | std::uint32_t(block[i * 4 + 3]);
    }
    for (int i = 16; i < 80; ++i) w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
    for (int i = 0; i < 80; ++i) {
        std::uint32_t f, k;
        if (i < 20) {
            f = (b & c) | (~b & d);
            k = 0x5A827999u;
        } else if (i < 40) {
            f = b ^ c ^ d;
            k = 0x6ED9EBA1u;
        } else if (i < 60) {
            f = (b & c) | (b & d) | (c & d);
            k = 0x8F1BBCDCu;
        } else {
            f = b ^ c ^ d;
            k = 0xCA62C1D6u;
        }
        std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
        e = d;
        d = c;
        c = rotl(b, 30);
        b = a;
        a = tmp;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
}

void Sha1::update(std::span<const std::uint8_t> data) {
    length_ += data.size();
    std::size_t offset = 0;
    if (buffered_ > 0) {
        std::size_t take = std::min(data.size(), std::size_t(64) - buffered_);
        std::memcpy(buffer_ + buffered_, data.data(), take);
        buffered_ += take;
        offset = take;
        if (buffered_ == 64) {
            process_block(buffer_);
            buffered_ = 0;
        }
    }
    while (offset + 64 <= data.size()) {
        process_block(data.data() + offset);
        offset += 64;
    }
    if (offset < data.size()) {
        std::memcpy(buffer_, data.data() + offset, data.size() - offset);
        buffered_ = data.size() - offset;
    }
}

void Sha1::update(const std::string& data) {
    update(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::array<std::uint8_t, 20> Sha1::finish() {
    std::uint64_t bit_length = length_ * 8;
    std::uint8_t pad = 0x80;
    update(std::span(&pad, 1));
    std::uint8_t zero = 0;
    while (buffered_ != 56) update(std::span(&zero, 1));
    std::uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i) len_bytes[i] = std::uint8_t(bit_length >> (56 - i * 8));
    update(std::span(len_bytes, 8));

    std::array<std::uint8_t, 20> out;
    for (int i = 0; i < 5; ++i) {
        out[i * 4] = std::uint8_t(h_[i] >> 24);
        out[i * 4 + 1] = std::uint8_t(h_[i] >> 16);
        out[i * 4 + 2] = std::uint8_t(h_[i] >> 8);
        out[i * 4 + 3] = std::uint8_t(h_[i]);
    }
    return out;
}

std::array<std::uint8_t, 20> sha1(std::span<const std::uint8_t> data) {
    Sha1 h;
    h.update(data);
    return h.finish();
}

std::string base32_encode(std::span<const std::uint8_t> data) {
    static const char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
    std::string out;
    out.reserve((data.size() * 8 + 4) / 5);
    std::uint32_t bits = 0;
    int bit_count = 0;
    for (std::uint8_t byte : data) {
        bits = (bits << 8) | byte;
        bit_count += 8;
        while (bit_count >= 5) {
            out += alphabet[(bits >> (bit_count - 5)) & 0x1F];
            bit_count -= 5;
        }
    }
    if (bit_count > 0) out += alphabet[(bits << (5 - bit_count)) & 0x1F];
    return out;
}

std::string warc_digest_label(std::span<const std::uint8_t> data) {
    auto digest = sha1(data);
    return "sha1:" + base32_encode(digest);
}

std::string warc_digest_label(const std::string& data) {
    return warc_digest_label(
        std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

}  // namespace darc::warc
