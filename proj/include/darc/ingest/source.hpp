#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "darc/canon/types.hpp"

namespace darc::ingest {

/// How to read one curated onion list (a CSV export or a pair of change-log
/// snapshots). Columns are configured, not hard-coded: upstream list formats
/// vary.
struct SourceSpec {
    enum class Format { csv, change_log };

    std::string source_tag;
    Format format = Format::csv;
    std::string alias_column = "alias";
    std::string uri_column = "onion_uri";
    std::optional<std::string> time_column;  // per-row Timestamp14 when mapped
    std::optional<Timestamp14> default_observed_at;
};

/// A row that could not become an Observation; reported, never fatal.
struct RowIssue {
    std::size_t row = 0;  // 1-based data row number
    std::string reason;   // "not_onion", "bad_uri", "bad_timestamp", "short_row", "duplicate_alias"
    std::string detail;
};

struct ParseResult {
    std::vector<canon::Observation> observations;
    std::vector<RowIssue> issues;
};

/// RFC 4180 parser: quoted fields, embedded commas, doubled quotes, and
/// newlines inside quotes. Returns rows of cells; no header handling.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Turns a CSV list file (header row required) into Observations. Rows with
/// surface hosts or malformed onions are reported in `issues` and skipped.
/// Throws Error{missing_column | no_timestamp | io_failure}.
ParseResult parse_list_text(const std::string& text, const SourceSpec& spec);
ParseResult parse_list(const std::filesystem::path& file, const SourceSpec& spec);

struct DiffResult {
    std::vector<canon::Observation> emitted;  // new entries + changed URIs
    std::vector<std::string> removed_aliases;  // reported; removals emit nothing
};

/// Compares two snapshots of the same source by alias (set semantics, row
/// order irrelevant) and emits only observations that can register new sites
/// or shifts. Throws Error{unparseable} when the lists mix source tags.
DiffResult diff_lists(const std::vector<canon::Observation>& old_list,
                      const std::vector<canon::Observation>& new_list);

}  // namespace darc::ingest
