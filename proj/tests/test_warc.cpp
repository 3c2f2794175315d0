#include <filesystem>
#include <fstream>
#include <random>

#include "darc/error.hpp"
#include "darc/warc/cdx.hpp"
#include "darc/warc/digest.hpp"
#include "darc/warc/io.hpp"
#include "darc/warc/store.hpp"
#include "doctest.h"

using namespace darc;
using namespace darc::warc;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("darc_warc_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

crawl::FetchResult make_fetch(const std::string& uri, const std::string& body,
                              const std::string& ts = "20210501120000", int status = 200) {
    crawl::FetchResult fetch;
    fetch.uri = canonicalize_uri(uri);
    fetch.request_head = "GET " + fetch.uri.path + " HTTP/1.1\r\nHost: " + fetch.uri.host +
                         "\r\nUser-Agent: darc/0.1\r\n\r\n";
    fetch.status = status;
    fetch.response_head = "HTTP/1.1 " + std::to_string(status) +
                          " OK\r\nContent-Type: text/html\r\nContent-Length: " +
                          std::to_string(body.size()) + "\r\n\r\n";
    fetch.body = body;
    fetch.fetch_started_at = Timestamp14::parse(ts);
    fetch.via_proxy = true;
    return fetch;
}

}  // namespace

TEST_CASE("sha1 and base32 against reference vectors") {
    CHECK(warc_digest_label(std::string("")) == "sha1:3I42H3S6NNFQ2MSVX7XZKYAYSCX5QBYJ");
    CHECK(warc_digest_label(std::string("abc")) == "sha1:VGMT4NSHA2AWVOR6EVYXQUGCNSONBWE5");
    CHECK(warc_digest_label(std::string("The quick brown fox jumps over the lazy dog")) ==
          "sha1:F7KODRT2FUUPZ3MET3Q3W5XHHENZH2YS");
    CHECK(warc_digest_label(std::string(1000000, 'a')) ==
          "sha1:GSVJOPGUYTNKJ5Q65MV5XLJHGFSTIALP");
    // incremental updates agree with one-shot hashing
    Sha1 h;
    h.update(std::string("The quick brown fox ju"));
    h.update(std::string("mps over the lazy dog"));
    CHECK("sha1:" + base32_encode(h.finish()) == "sha1:F7KODRT2FUUPZ3MET3Q3W5XHHENZH2YS");
}

TEST_CASE("write_capture round-trips through read_records") {
    for (bool gzip : {false, true}) {
        CAPTURE(gzip);
        auto dir = temp_dir(gzip ? "rt_gz" : "rt");
        WarcStore store(dir, {.gzip = gzip, .max_file_bytes = 1 << 30, .job_id = "t1"});

        auto fetch = make_fetch("http://bfnews3u2ox4m4ty.onion/page", "<html>hi</html>");
        FirstObserved first{canonicalize_uri("http://oldbfnewsaddress1.onion/"),
                            canonicalize_uri("http://bfnews3u2ox4m4ty.onion/"), "s000001"};
        auto entries = store.write_capture(fetch, first);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].status == 200);
        CHECK(entries[0].original_uri == "http://bfnews3u2ox4m4ty.onion/page");

        auto files = store.files();
        REQUIRE(files.size() == 1);
        auto records = read_records(files[0]);
        REQUIRE(records.size() == 4);  // warcinfo + request + response + metadata
        CHECK(records[0].record.kind() == RecordKind::warcinfo);
        CHECK(records[1].record.kind() == RecordKind::request);
        CHECK(records[2].record.kind() == RecordKind::response);
        CHECK(records[3].record.kind() == RecordKind::metadata);

        const auto& response = records[2].record;
        CHECK(response.target_uri() == "http://bfnews3u2ox4m4ty.onion/page");
        CHECK(response.capture_time().value() == "20210501120000");
        CHECK(response.payload() == "<html>hi</html>");
        CHECK(response.header("WARC-X-First-Observed-URI").value_or("") ==
              "http://oldbfnewsaddress1.onion/");
        CHECK(response.http_status() == 200);

        const auto& metadata = records[3].record;
        CHECK(metadata.block.find("X-First-Observed-URI: http://oldbfnewsaddress1.onion/") !=
              std::string::npos);
        CHECK(metadata.block.find("X-Site-ID: s000001") != std::string::npos);
        CHECK(metadata.header("WARC-Concurrent-To").value_or("") == response.record_id());

        // placement from the index dereferences to the response record
        WarcReader reader(files[0]);
        std::optional<ReadRecord> found;
        while (auto r = reader.next()) {
            if (r->placement.offset == entries[0].offset) found = std::move(r);
        }
        REQUIRE(found.has_value());
        CHECK(found->placement.length == entries[0].length);
        CHECK(found->record.kind() == RecordKind::response);
    }
}

TEST_CASE("never-shifted capture carries its own root as first observed") {
    auto dir = temp_dir("identity");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t2"});
    auto root = canonicalize_uri("http://zqktlwi4fecvo6ri.onion/");
    auto fetch = make_fetch("http://zqktlwi4fecvo6ri.onion/", "wiki");
    store.write_capture(fetch, FirstObserved{root, root, "s000001"});
    auto records = read_records(store.files()[0]);
    CHECK(records[2].record.header("WARC-X-First-Observed-URI").value_or("") == root.render());
}

TEST_CASE("warc records always carry the required named fields") {
    auto dir = temp_dir("required");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t3"});
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/a", "x"), std::nullopt);
    for (const auto& read : read_records(store.files()[0])) {
        CHECK(read.record.version == "WARC/1.1");
        CHECK(read.record.header("WARC-Record-ID").has_value());
        CHECK(read.record.header("WARC-Date").has_value());
        CHECK(read.record.header("WARC-Type").has_value());
        CHECK(read.record.header("Content-Length").has_value());
        CHECK(std::to_string(read.record.block.size()) ==
              read.record.header("Content-Length").value());
    }
    // no metadata record without canonicalizer context
    CHECK(read_records(store.files()[0]).size() == 3);
}

TEST_CASE("truncated files report malformed at the truncation offset") {
    auto dir = temp_dir("trunc");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t4"});
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/a", "0123456789"),
                        std::nullopt);
    auto path = store.files()[0];
    auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 30);

    try {
        read_records(path);
        FAIL("expected malformed_record");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::malformed_record);
        CHECK(std::string(e.what()).find(std::to_string(size - 30)) != std::string::npos);
    }
}

TEST_CASE("digest tampering is caught") {
    auto dir = temp_dir("tamper");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t5"});
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/a", "payload-bytes"),
                        std::nullopt);
    auto path = store.files()[0];

    std::fstream file(path, std::ios::in | std::ios::out | std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(file)), {});
    auto at = content.find("payload-bytes");
    REQUIRE(at != std::string::npos);
    file.seekp(static_cast<std::streamoff>(at));
    file.write("PAYLOAD-BYTES", 13);
    file.close();

    CHECK_THROWS_AS(read_records(path), Error);
    try {
        read_records(path);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::digest_mismatch);
    }
}

TEST_CASE("unknown extension headers are preserved, not fatal") {
    auto dir = temp_dir("ext");
    WarcWriter writer(dir / "ext.warc");
    WarcRecord record;
    record.set_header("WARC-Type", "resource");
    record.set_header("WARC-Record-ID", new_record_id());
    record.set_header("WARC-Date", "2021-05-01T00:00:00Z");
    record.set_header("WARC-X-Custom-Extension", "kept");
    record.block = "data";
    writer.write(record);
    auto records = read_records(dir / "ext.warc");
    REQUIRE(records.size() == 1);
    CHECK(records[0].record.header("WARC-X-Custom-Extension").value_or("") == "kept");
    CHECK(records[0].record.kind() == RecordKind::other);
}

TEST_CASE("size-based rollover splits files per host") {
    auto dir = temp_dir("roll");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 2048, .job_id = "t6"});
    for (int i = 0; i < 6; ++i) {
        store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/p" + std::to_string(i),
                                       std::string(512, 'x')),
                            std::nullopt);
    }
    CHECK(store.files().size() >= 2);
    std::size_t responses = 0;
    for (const auto& path : store.files()) {
        for (const auto& read : read_records(path)) {
            if (read.record.kind() == RecordKind::response) ++responses;
        }
    }
    CHECK(responses == 6);
}

TEST_CASE("captures of different hosts land in different files") {
    auto dir = temp_dir("perhost");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t7"});
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/", "a"), std::nullopt);
    store.write_capture(make_fetch("http://bfnews3u2ox4m4ty.onion/", "b"), std::nullopt);
    CHECK(store.files().size() == 2);
}

TEST_CASE("cdx lines round-trip and the index sorts by (key, timestamp)") {
    CdxEntry entry;
    entry.searchable_key = "http://(onion,zqktlwi4fecvo6ri,)/a";
    entry.timestamp = Timestamp14::parse("20210501120000");
    entry.original_uri = "http://zqktlwi4fecvo6ri.onion/a";
    entry.digest = "sha1:VGMT4NSHA2AWVOR6EVYXQUGCNSONBWE5";
    entry.status = 200;
    entry.length = 321;
    entry.offset = 1234;
    entry.warc_file = "t-zq-00000.warc";
    auto parsed = CdxEntry::parse_line(entry.line());
    CHECK(parsed.line() == entry.line());

    auto dir = temp_dir("cdx");
    WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "t8"});
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/b", "b", "20210501120200"),
                        std::nullopt);
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/a", "a2", "20210501120100"),
                        std::nullopt);
    store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/a", "a1", "20210501120000"),
                        std::nullopt);
    store.save_index(dir / "index.cdx");
    auto loaded = CdxIndex::load(dir / "index.cdx");
    REQUIRE(loaded.entries().size() == 3);
    for (std::size_t i = 1; i < loaded.entries().size(); ++i)
        CHECK(loaded.entries()[i - 1].sort_key() <= loaded.entries()[i].sort_key());

    // rebuild from the warc files equals the incrementally built index
    auto rebuilt = CdxIndex::build(store.files());
    REQUIRE(rebuilt.entries().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rebuilt.entries()[i].line() == loaded.entries()[i].line());
    }
}

TEST_CASE("lookup picks the nearest capture, ties toward earlier") {
    std::vector<CdxEntry> entries;
    auto push = [&](const std::string& ts) {
        CdxEntry e;
        e.searchable_key = "http://(onion,zqktlwi4fecvo6ri,)/";
        e.timestamp = Timestamp14::parse(ts);
        e.original_uri = "http://zqktlwi4fecvo6ri.onion/";
        e.digest = "-";
        e.status = 200;
        e.warc_file = "f.warc";
        entries.push_back(e);
    };
    push("20210101000000");
    push("20210301000000");
    CdxIndex index(std::move(entries));
    auto uri = canonicalize_uri("http://zqktlwi4fecvo6ri.onion/");

    CHECK(index.lookup(uri, Timestamp14::parse("20210101000000")).timestamp.value() ==
          "20210101000000");
    // past the midpoint toward the later capture
    CHECK(index.lookup(uri, Timestamp14::parse("20210215000000")).timestamp.value() ==
          "20210301000000");
    // exact midpoint is a tie: earlier wins
    CHECK(index.lookup(uri, Timestamp14::parse("20210130000000")).timestamp.value() ==
          "20210101000000");
    // clamp on both sides
    CHECK(index.lookup(uri, Timestamp14::parse("20200101000000")).timestamp.value() ==
          "20210101000000");
    CHECK(index.lookup(uri, Timestamp14::parse("20220101000000")).timestamp.value() ==
          "20210301000000");

    CHECK_THROWS_AS(index.lookup(canonicalize_uri("http://bfnews3u2ox4m4ty.onion/"),
                                 Timestamp14::parse("20210101000000")),
                    Error);
}

TEST_CASE("index entries dereference to parseable records of the stated length") {
    auto dir = temp_dir("deref");
    for (bool gzip : {false, true}) {
        WarcStore store(dir, {.gzip = gzip, .max_file_bytes = 1 << 30,
                              .job_id = gzip ? "gz" : "plain"});
        store.write_capture(make_fetch("http://zqktlwi4fecvo6ri.onion/x", "deref-me"),
                            std::nullopt);
        for (const auto& entry : store.index().entries()) {
            WarcReader reader(store.directory() / entry.warc_file);
            bool found = false;
            while (auto read = reader.next()) {
                if (read->placement.offset == entry.offset) {
                    CHECK(read->placement.length == entry.length);
                    CHECK(read->record.kind() == RecordKind::response);
                    CHECK(canonicalize_uri(read->record.target_uri()).render() ==
                          entry.original_uri);
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}
