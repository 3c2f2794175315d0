#include "darc/warc/store.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>

#include "darc/error.hpp"
#include "darc/warc/digest.hpp"

namespace darc::warc {

namespace {

std::string sanitize_for_filename(const std::string& host) {
    std::string out;
    for (char c : host) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    }
    return out;
}

WarcRecord warcinfo_record(const std::string& filename) {
    WarcRecord record;
    record.set_header("WARC-Type", "warcinfo");
    record.set_header("WARC-Record-ID", new_record_id());
    record.set_header("WARC-Date", Timestamp14::from_time(std::chrono::system_clock::now()).iso8601());
    record.set_header("WARC-Filename", filename);
    record.set_header("Content-Type", "application/warc-fields");
    record.block =
        "software: darc/0.1\r\n"
        "format: WARC File Format 1.1\r\n";
    return record;
}

}  // namespace

WarcStore::WarcStore(std::filesystem::path directory, Options options)
    : directory_(std::move(directory)), options_(std::move(options)) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    if (ec) raise(Errc::io_failure, "cannot create " + directory_.string() + ": " + ec.message());
}

WarcWriter& WarcStore::writer_for(const std::string& host) {
    HostFile& entry = open_files_[host];
    if (entry.writer && entry.writer->bytes_written() >= options_.max_file_bytes) {
        entry.writer.reset();
        ++entry.serial;
    }
    if (!entry.writer) {
        char serial[8];
        std::snprintf(serial, sizeof serial, "%05d", entry.serial);
        std::string name = options_.job_id + "-" + sanitize_for_filename(host) + "-" + serial +
                           (options_.gzip ? ".warc.gz" : ".warc");
        auto path = directory_ / name;
        entry.writer = std::make_unique<WarcWriter>(path, WriterOptions{options_.gzip});
        created_.push_back(path);
        if (entry.writer->bytes_written() == 0) entry.writer->write(warcinfo_record(name));
    }
    return *entry.writer;
}

std::vector<CdxEntry> WarcStore::write_capture(const crawl::FetchResult& fetch,
                                               const std::optional<FirstObserved>& first_observed) {
    if (fetch.body.size() > kMaxPayloadBytes)
        raise(Errc::oversize_payload, "payload of " + std::to_string(fetch.body.size()) +
                                          " bytes exceeds store limit");
    std::lock_guard<std::mutex> lock(mutex_);
    WarcWriter& writer = writer_for(fetch.uri.host);

    const std::string date = fetch.fetch_started_at.iso8601();
    const std::string target = fetch.uri.render();
    const std::string response_id = new_record_id();
    const std::string request_id = new_record_id();

    WarcRecord request;
    request.set_header("WARC-Type", "request");
    request.set_header("WARC-Record-ID", request_id);
    request.set_header("WARC-Date", date);
    request.set_header("WARC-Target-URI", target);
    request.set_header("WARC-Concurrent-To", response_id);
    request.set_header("Content-Type", "application/http;msgtype=request");
    request.block = fetch.request_head;
    request.set_header("WARC-Block-Digest", warc_digest_label(request.block));
    writer.write(std::move(request));

    WarcRecord response;
    response.set_header("WARC-Type", "response");
    response.set_header("WARC-Record-ID", response_id);
    response.set_header("WARC-Date", date);
    response.set_header("WARC-Target-URI", target);
    response.set_header("WARC-Concurrent-To", request_id);
    response.set_header("Content-Type", "application/http;msgtype=response");
    response.block = fetch.response_block();
    response.set_header("WARC-Block-Digest", warc_digest_label(response.block));
    const std::string payload_digest = warc_digest_label(fetch.body);
    response.set_header("WARC-Payload-Digest", payload_digest);
    if (first_observed)
        response.set_header("WARC-X-First-Observed-URI", first_observed->uri.render());
    Placement placement = writer.write(std::move(response));

    if (first_observed) {
        WarcRecord metadata;
        metadata.set_header("WARC-Type", "metadata");
        metadata.set_header("WARC-Record-ID", new_record_id());
        metadata.set_header("WARC-Date", date);
        metadata.set_header("WARC-Target-URI", target);
        metadata.set_header("WARC-Concurrent-To", response_id);
        metadata.set_header("Content-Type", "application/warc-fields");
        metadata.block = "X-First-Observed-URI: " + first_observed->uri.render() + "\r\n" +
                         "X-Current-URI: " + first_observed->current_uri.render() + "\r\n" +
                         "X-Site-ID: " + first_observed->site_id + "\r\n";
        writer.write(std::move(metadata));
    }

    CdxEntry entry;
    entry.searchable_key = fetch.uri.surt_key();
    entry.timestamp = fetch.fetch_started_at;
    entry.original_uri = target;
    entry.digest = payload_digest;
    entry.status = fetch.status;
    entry.length = placement.length;
    entry.offset = placement.offset;
    entry.warc_file = writer.filename();
    index_.add(entry);
    return {entry};
}

std::vector<std::filesystem::path> WarcStore::files() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return created_;
}

}  // namespace darc::warc
