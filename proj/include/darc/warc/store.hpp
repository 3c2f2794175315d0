#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "darc/crawl/fetch_result.hpp"
#include "darc/warc/cdx.hpp"
#include "darc/warc/io.hpp"

namespace darc::warc {

/// Canonicalizer context attached to a capture: the site's first observed
/// URI-R plus its stable identity.
struct FirstObserved {
    CanonicalUri uri;
    CanonicalUri current_uri;
    std::string site_id;
};

struct StoreOptions {
    bool gzip = false;
    std::uint64_t max_file_bytes = 1ull << 30;  // 1 GiB rollover
    std::string job_id = "job";
};

/// Archival storage for one crawl job. Captures for each target host go to
/// that host's own WARC file, rolled over by size. Writes are serialized per
/// store; one request record, one response record, and (when canonicalizer
/// context is known) one metadata record per capture.
class WarcStore {
public:
    using Options = StoreOptions;

    WarcStore(std::filesystem::path directory, Options options = Options());

    /// Writes the capture; the response record carries
    /// `WARC-X-First-Observed-URI` when `first_observed` is present, restated
    /// in a paired metadata record. Returns the new index entries.
    /// Throws Error{io_failure | oversize_payload}.
    std::vector<CdxEntry> write_capture(const crawl::FetchResult& fetch,
                                        const std::optional<FirstObserved>& first_observed);

    /// Every WARC file this store has written to, in creation order.
    std::vector<std::filesystem::path> files() const;

    /// Index entries accumulated across write_capture calls.
    const CdxIndex& index() const { return index_; }
    void save_index(const std::filesystem::path& cdx_file) const { index_.save(cdx_file); }

    const std::filesystem::path& directory() const { return directory_; }

    /// Maximum stored payload; larger fetches are refused as oversize.
    static constexpr std::uint64_t kMaxPayloadBytes = 256ull << 20;

private:
    WarcWriter& writer_for(const std::string& host);

    std::filesystem::path directory_;
    Options options_;
    mutable std::mutex mutex_;
    struct HostFile {
        std::unique_ptr<WarcWriter> writer;
        int serial = 0;
    };
    std::map<std::string, HostFile> open_files_;
    std::vector<std::filesystem::path> created_;
    CdxIndex index_;
};

}  // namespace darc::warc
