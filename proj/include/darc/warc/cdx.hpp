#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "darc/core/timestamp.hpp"
#include "darc/core/uri.hpp"

namespace darc::warc {

/// One index line: `key timestamp original digest status length offset filename`.
struct CdxEntry {
    std::string searchable_key;  // SURT form of the canonical target URI
    Timestamp14 timestamp;
    std::string original_uri;
    std::string digest;  // payload digest, sha1:<base32>
    int status = 0;
    std::uint64_t length = 0;  // framed record length in the WARC file
    std::uint64_t offset = 0;
    std::string warc_file;  // filename, resolved relative to the index

    std::string line() const;
    static CdxEntry parse_line(const std::string& line);

    auto sort_key() const { return std::tie(searchable_key, timestamp, warc_file, offset); }
};

/// Sorted, binary-searchable capture index.
class CdxIndex {
public:
    CdxIndex() = default;
    explicit CdxIndex(std::vector<CdxEntry> entries);

    /// Scans WARC files and indexes every response record.
    static CdxIndex build(const std::vector<std::filesystem::path>& warc_files);

    static CdxIndex load(const std::filesystem::path& cdx_file);
    void save(const std::filesystem::path& cdx_file) const;

    void add(CdxEntry entry);
    void add_all(const std::vector<CdxEntry>& entries);

    /// Entry for `uri` nearest to `at`; ties break toward the earlier
    /// timestamp. Throws Error{not_captured}.
    const CdxEntry& lookup(const CanonicalUri& uri, const Timestamp14& at) const;

    /// All captures of `uri`, oldest first.
    std::vector<CdxEntry> all_for(const CanonicalUri& uri) const;

    bool has(const CanonicalUri& uri) const { return !all_for(uri).empty(); }
    const std::vector<CdxEntry>& entries() const { return entries_; }

private:
    void sort();
    std::vector<CdxEntry> entries_;
};

}  // namespace darc::warc
