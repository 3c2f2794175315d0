#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "darc/warc/record.hpp"

namespace darc::warc {

/// Byte placement of a framed record inside its file. For gzip files the
/// offset/length describe the compressed member, so a CDX consumer can seek
/// and inflate exactly one record.
struct Placement {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};

struct WriterOptions {
    bool gzip = false;
};

/// Appends records to one WARC file, optionally gzip-compressing each record
/// into its own member (the standard .warc.gz layout).
class WarcWriter {
public:
    using Options = WriterOptions;

    WarcWriter(const std::filesystem::path& path, Options options = Options());
    ~WarcWriter();

    WarcWriter(const WarcWriter&) = delete;
    WarcWriter& operator=(const WarcWriter&) = delete;

    /// Serializes the record (Content-Length recomputed, CRLF framing) and
    /// appends it. Throws Error{io_failure}.
    Placement write(WarcRecord record);

    std::uint64_t bytes_written() const { return bytes_written_; }
    const std::filesystem::path& path() const { return path_; }
    std::string filename() const { return path_.filename().string(); }

private:
    std::filesystem::path path_;
    Options options_;
    std::ofstream out_;
    std::uint64_t bytes_written_ = 0;
};

struct ReadRecord {
    WarcRecord record;
    Placement placement;
};

/// Streams records out of a WARC file (plain or per-record gzip, detected by
/// magic). Verifies digests and framing; unknown extension fields are
/// surfaced verbatim on the record.
class WarcReader {
public:
    explicit WarcReader(const std::filesystem::path& path);
    ~WarcReader();

    /// Next record, or nullopt at clean end of file.
    /// Throws Error{malformed_record} (with the byte offset) and
    /// Error{digest_mismatch}.
    std::optional<ReadRecord> next();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Reads and verifies every record.
std::vector<ReadRecord> read_records(const std::filesystem::path& path);

/// Seeks to a CDX placement and parses exactly that record (plain or gzip
/// member). Throws Error{malformed_record | digest_mismatch | io_failure}.
WarcRecord read_record_at(const std::filesystem::path& path, const Placement& placement);

}  // namespace darc::warc
