#include "darc/warc/record.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>

namespace darc::warc {

namespace {

bool iequals(const std::string& a, const std::string& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

const char* record_kind_name(RecordKind kind) noexcept {
    switch (kind) {
        case RecordKind::warcinfo: return "warcinfo";
        case RecordKind::request: return "request";
        case RecordKind::response: return "response";
        case RecordKind::metadata: return "metadata";
        case RecordKind::other: return "other";
    }
    return "other";
}

std::optional<std::string> WarcRecord::header(const std::string& name) const {
    for (const auto& [key, value] : headers) {
        if (iequals(key, name)) return value;
    }
    return std::nullopt;
}

void WarcRecord::set_header(const std::string& name, const std::string& value) {
    for (auto& [key, existing] : headers) {
        if (iequals(key, name)) {
            existing = value;
            return;
        }
    }
    headers.emplace_back(name, value);
}

RecordKind WarcRecord::kind() const {
    auto type = header("WARC-Type").value_or("");
    if (type == "warcinfo") return RecordKind::warcinfo;
    if (type == "request") return RecordKind::request;
    if (type == "response") return RecordKind::response;
    if (type == "metadata") return RecordKind::metadata;
    return RecordKind::other;
}

std::string WarcRecord::record_id() const { return header("WARC-Record-ID").value_or(""); }

std::string WarcRecord::target_uri() const { return header("WARC-Target-URI").value_or(""); }

Timestamp14 WarcRecord::capture_time() const {
    // WARC-Date is ISO 8601 with second granularity: YYYY-MM-DDThh:mm:ssZ
    auto date = header("WARC-Date").value_or("");
    std::string digits;
    for (char c : date) {
        if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
        if (digits.size() == 14) break;
    }
    return Timestamp14::parse(digits);
}

bool WarcRecord::is_http() const {
    auto ct = header("Content-Type").value_or("");
    return ct.rfind("application/http", 0) == 0;
}

std::string WarcRecord::payload() const {
    if (!is_http()) return block;
    auto split = block.find("\r\n\r\n");
    if (split == std::string::npos) return "";
    return block.substr(split + 4);
}

std::string WarcRecord::http_head() const {
    if (!is_http()) return "";
    auto split = block.find("\r\n\r\n");
    if (split == std::string::npos) return block;
    return block.substr(0, split + 4);
}

int WarcRecord::http_status() const {
    if (!is_http()) return 0;
    // "HTTP/1.1 200 OK"
    auto space = block.find(' ');
    if (space == std::string::npos || space + 4 > block.size()) return 0;
    int status = 0;
    for (int i = 1; i <= 3; ++i) {
        char c = block[space + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return 0;
        status = status * 10 + (c - '0');
    }
    return status;
}

std::string new_record_id() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uint64_t hi = rng(), lo = rng();
    // RFC 4122 version 4 variant bits
    hi = (hi & 0xFFFFFFFFFFFF0FFFull) | 0x0000000000004000ull;
    lo = (lo & 0x3FFFFFFFFFFFFFFFull) | 0x8000000000000000ull;
    char buf[64];
    std::snprintf(buf, sizeof buf, "<urn:uuid:%08x-%04x-%04x-%04x-%012llx>",
                  static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xFFFF),
                  static_cast<unsigned>(hi & 0xFFFF), static_cast<unsigned>(lo >> 48),
                  static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFull));
    return buf;
}

}  // namespace darc::warc
