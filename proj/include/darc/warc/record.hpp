#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darc/core/timestamp.hpp"

namespace darc::warc {

enum class RecordKind { warcinfo, request, response, metadata, other };

const char* record_kind_name(RecordKind kind) noexcept;

/// One WARC record: named fields (order preserved, unknown extensions kept
/// verbatim) plus the content block.
struct WarcRecord {
    std::string version = "WARC/1.1";
    std::vector<std::pair<std::string, std::string>> headers;
    std::string block;

    /// Case-insensitive named-field lookup.
    std::optional<std::string> header(const std::string& name) const;
    void set_header(const std::string& name, const std::string& value);

    RecordKind kind() const;
    std::string record_id() const;
    std::string target_uri() const;
    Timestamp14 capture_time() const;  // from WARC-Date

    bool is_http() const;  // Content-Type: application/http;...
    /// For http records: the block minus the HTTP head; otherwise the block.
    std::string payload() const;
    std::string http_head() const;
    int http_status() const;  // 0 when not an http block
};

/// Fresh `<urn:uuid:...>` record id.
std::string new_record_id();

}  // namespace darc::warc
