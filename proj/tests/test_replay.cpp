#include <filesystem>
#include <map>
#include <random>

#include "darc/canon/client.hpp"
#include "darc/error.hpp"
#include "darc/replay/resolver.hpp"
#include "darc/replay/rewrite.hpp"
#include "darc/replay/service.hpp"
#include "darc/replay/timemap.hpp"
#include "darc/replay/urim.hpp"
#include "darc/warc/store.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "support/obs_gen.hpp"

using namespace darc;
using namespace darc::replay;
using nlohmann::json;

namespace {

const char* kHostA = "aaaareplayoldhos.onion";
const char* kHostB = "bbbbreplaynewhos.onion";

class FakeCanon : public canon::CanonClient {
public:
    std::optional<canon::TimelineInfo> info;
    bool unreachable = false;

    std::optional<std::pair<std::string, CanonicalUri>> current(
        const CanonicalUri& uri) override {
        if (unreachable) raise(Errc::io_failure, "down");
        if (!info || !matches(uri)) return std::nullopt;
        return std::make_pair(info->site_id, info->current());
    }
    std::optional<CanonicalUri> at(const CanonicalUri& uri, const Timestamp14& t) override {
        if (unreachable) raise(Errc::io_failure, "down");
        if (!info || !matches(uri)) return std::nullopt;
        const canon::TimelineEntry* chosen = &info->entries.front();
        for (const auto& entry : info->entries)
            if (entry.first_seen <= t) chosen = &entry;
        return chosen->uri;
    }
    std::optional<canon::TimelineInfo> timeline(const CanonicalUri& uri) override {
        if (unreachable) raise(Errc::io_failure, "down");
        if (!info || !matches(uri)) return std::nullopt;
        return info;
    }

private:
    bool matches(const CanonicalUri& uri) const {
        for (const auto& entry : info->entries)
            if (entry.uri.host == uri.host) return true;
        return false;
    }
};

FakeCanon two_era_canon() {
    FakeCanon fake;
    canon::TimelineInfo info;
    info.site_id = "s000001";
    info.entries = {{canonicalize_uri(std::string("http://") + kHostA + "/"),
                     Timestamp14::parse("20210101000000"), Timestamp14::parse("20210301000000")},
                    {canonicalize_uri(std::string("http://") + kHostB + "/"),
                     Timestamp14::parse("20210401000000"), Timestamp14::parse("20210601000000")}};
    fake.info = info;
    return fake;
}

warc::CdxEntry capture(const std::string& uri, const std::string& ts) {
    warc::CdxEntry entry;
    auto canonical = canonicalize_uri(uri);
    entry.searchable_key = canonical.surt_key();
    entry.timestamp = Timestamp14::parse(ts);
    entry.original_uri = canonical.render();
    entry.digest = "sha1:AAAA";
    entry.status = 200;
    entry.warc_file = "x.warc";
    return entry;
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("darc_replay_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

crawl::FetchResult make_fetch(const std::string& uri, const std::string& body,
                              const std::string& ts, const std::string& content_type) {
    crawl::FetchResult fetch;
    fetch.uri = canonicalize_uri(uri);
    fetch.request_head = "GET " + fetch.uri.path + " HTTP/1.1\r\nHost: " + fetch.uri.host +
                         "\r\n\r\n";
    fetch.status = 200;
    fetch.response_head = "HTTP/1.1 200 OK\r\nContent-Type: " + content_type +
                          "\r\nContent-Length: " + std::to_string(body.size()) + "\r\n\r\n";
    fetch.body = body;
    fetch.fetch_started_at = Timestamp14::parse(ts);
    return fetch;
}

}  // namespace

TEST_CASE("urim parsing is the exact inverse of rendering") {
    UriM urim{"/replay", Timestamp14::parse("20210501120000"),
              canonicalize_uri("http://zqktlwi4fecvo6ri.onion/a/b?q=1")};
    CHECK(urim.render() == "/replay/20210501120000/http://zqktlwi4fecvo6ri.onion/a/b?q=1");
    CHECK(UriM::parse(urim.render(), "/replay") == urim);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        UriM random{"/replay",
                    Timestamp14::from_epoch_seconds(1500000000 +
                                                    static_cast<std::int64_t>(rng() % 100000000)),
                    testgen::random_onion_root(rng)};
        CHECK(UriM::parse(random.render(), "/replay") == random);
    }

    CHECK_THROWS_AS(UriM::parse("/other/20210501120000/http://x.onion/", "/replay"), Error);
    CHECK_THROWS_AS(UriM::parse("/replay/not14digits/http://x.onion/", "/replay"), Error);
}

TEST_CASE("rewrite_links: spec examples") {
    UriM context{"/replay", Timestamp14::parse("20210501120000"),
                 canonicalize_uri("http://zqktlwi4fecvo6ri.onion/")};

    CHECK(rewrite_links("<a href=\"/about\">x</a>", context) ==
          "<a href=\"/replay/20210501120000/http://zqktlwi4fecvo6ri.onion/about\">x</a>");
    CHECK(rewrite_links("<a href=\"mailto:who@example.org\">m</a>", context) ==
          "<a href=\"mailto:who@example.org\">m</a>");

    // absolute and relative forms; attribute quoting and surrounding bytes preserved
    std::string html =
        "<img src='logo.png'> <script src=\"/js/app.js\"></script>"
        "<a href=\"http://bfnews3u2ox4m4ty.onion/p?a=1&amp;b=2\">abs</a>"
        "<a href=\"#section\">frag</a><p>text &amp; more</p>"
        "<script>var x = \"<a href='/untouched'>\";</script>";
    std::string rewritten = rewrite_links(html, context);
    CHECK(rewritten.find("src='/replay/20210501120000/http://zqktlwi4fecvo6ri.onion/logo.png'") !=
          std::string::npos);
    CHECK(rewritten.find(
              "src=\"/replay/20210501120000/http://zqktlwi4fecvo6ri.onion/js/app.js\"") !=
          std::string::npos);
    CHECK(rewritten.find(
              "href=\"/replay/20210501120000/http://bfnews3u2ox4m4ty.onion/p?a=1&b=2\"") !=
          std::string::npos);
    CHECK(rewritten.find("href=\"#section\"") != std::string::npos);
    CHECK(rewritten.find("<p>text &amp; more</p>") != std::string::npos);
    CHECK(rewritten.find("<a href='/untouched'>") != std::string::npos);  // inside script body

    // no references -> byte-identical
    std::string plain = "<html><body><p>nothing to rewrite</p></body></html>";
    CHECK(rewrite_links(plain, context) == plain);
}

TEST_CASE("resolver: era substitution and direct hits") {
    std::vector<warc::CdxEntry> entries;
    entries.push_back(capture(std::string("http://") + kHostA + "/", "20210105000000"));
    entries.push_back(capture(std::string("http://") + kHostA + "/page", "20210106000000"));
    entries.push_back(capture(std::string("http://") + kHostB + "/", "20210405000000"));
    entries.push_back(capture(std::string("http://") + kHostB + "/page", "20210406000000"));
    warc::CdxIndex index(std::move(entries));
    FakeCanon fake = two_era_canon();
    MementoResolver resolver(index, &fake);

    SUBCASE("current host at a pre-shift timestamp serves the pre-shift capture") {
        auto result = resolver.resolve(canonicalize_uri(std::string("http://") + kHostB + "/"),
                                       Timestamp14::parse("20210110000000"));
        REQUIRE(result.entry.has_value());
        CHECK(result.entry->original_uri == std::string("http://") + kHostA + "/");
        CHECK(result.era_substituted);
        CHECK(result.trace.at("resolved").at("era_substituted") == true);
        // path preserved under substitution
        auto paged = resolver.resolve(
            canonicalize_uri(std::string("http://") + kHostB + "/page"),
            Timestamp14::parse("20210110000000"));
        REQUIRE(paged.entry.has_value());
        CHECK(paged.entry->original_uri == std::string("http://") + kHostA + "/page");
    }

    SUBCASE("requested URI identical to stored URI is a direct hit") {
        auto result = resolver.resolve(canonicalize_uri(std::string("http://") + kHostA + "/"),
                                       Timestamp14::parse("20210105000000"));
        REQUIRE(result.entry.has_value());
        CHECK(result.entry->original_uri == std::string("http://") + kHostA + "/");
        CHECK(!result.era_substituted);
    }

    SUBCASE("degraded mode is single-URI wayback, never errors on direct hits") {
        MementoResolver lonely(index, nullptr);
        auto result = lonely.resolve(canonicalize_uri(std::string("http://") + kHostB + "/"),
                                     Timestamp14::parse("20210110000000"));
        REQUIRE(result.entry.has_value());
        CHECK(result.entry->original_uri == std::string("http://") + kHostB + "/");
        CHECK(!result.era_substituted);

        FakeCanon down = two_era_canon();
        down.unreachable = true;
        MementoResolver degraded(index, &down);
        auto hit = degraded.resolve(canonicalize_uri(std::string("http://") + kHostA + "/"),
                                    Timestamp14::parse("20210105000000"));
        REQUIRE(hit.entry.has_value());
        CHECK(hit.trace.at("canonicalizer") == "unreachable");
    }

    SUBCASE("never captured anywhere lists the tried eras") {
        auto result = resolver.resolve(
            canonicalize_uri(std::string("http://") + kHostB + "/never-captured"),
            Timestamp14::parse("20210110000000"));
        CHECK(!result.entry.has_value());
        REQUIRE(result.tried.size() == 2);  // B-form and A-form of the path
    }
}

TEST_CASE("resolver equals the exhaustive (era x capture) oracle on random lookups") {
    std::mt19937_64 rng(77);
    FakeCanon fake = two_era_canon();

    // randomized capture sets across both eras and a handful of paths
    std::vector<std::string> paths{"/", "/p1", "/p2", "/deep/page"};
    std::vector<warc::CdxEntry> entries;
    std::int64_t base_epoch = Timestamp14::parse("20210101000000").epoch_seconds();
    for (int i = 0; i < 40; ++i) {
        const char* host = (rng() % 2) ? kHostA : kHostB;
        const auto& path = paths[rng() % paths.size()];
        auto ts = Timestamp14::from_epoch_seconds(
            base_epoch + static_cast<std::int64_t>(rng() % (180LL * 86400)));
        entries.push_back(capture(std::string("http://") + host + path, ts.value()));
    }
    warc::CdxIndex index(std::move(entries));
    MementoResolver resolver(index, &fake);

    int resolved_count = 0;
    for (int probe = 0; probe < 500; ++probe) {
        const char* host = (rng() % 2) ? kHostA : kHostB;
        const auto& path = paths[rng() % paths.size()];
        auto target = canonicalize_uri(std::string("http://") + host + path);
        auto at = Timestamp14::from_epoch_seconds(
            base_epoch + static_cast<std::int64_t>(rng() % (240LL * 86400)));

        // exhaustive oracle: all (era URI, capture) pairs, nearest, ties earlier;
        // candidate order = request target first, then timeline eras
        std::vector<std::string> candidate_uris{target.render()};
        for (const char* era_host : {kHostA, kHostB}) {
            std::string era_uri = canonicalize_uri(std::string("http://") + era_host + path).render();
            if (std::find(candidate_uris.begin(), candidate_uris.end(), era_uri) ==
                candidate_uris.end())
                candidate_uris.push_back(era_uri);
        }
        const warc::CdxEntry* expect = nullptr;
        std::size_t expect_rank = 0;
        for (const auto& entry : index.entries()) {
            auto rank_it = std::find(candidate_uris.begin(), candidate_uris.end(),
                                     entry.original_uri);
            if (rank_it == candidate_uris.end()) continue;
            std::size_t rank = static_cast<std::size_t>(rank_it - candidate_uris.begin());
            auto dist = [&](const warc::CdxEntry& e) {
                auto d = e.timestamp.epoch_seconds() - at.epoch_seconds();
                return d < 0 ? -d : d;
            };
            if (!expect || dist(entry) < dist(*expect) ||
                (dist(entry) == dist(*expect) && entry.timestamp < expect->timestamp) ||
                (dist(entry) == dist(*expect) && entry.timestamp == expect->timestamp &&
                 rank < expect_rank)) {
                expect = &entry;
                expect_rank = rank;
            }
        }

        auto result = resolver.resolve(target, at);
        if (!expect) {
            CHECK(!result.entry.has_value());
            continue;
        }
        REQUIRE(result.entry.has_value());
        CAPTURE(target.render());
        CAPTURE(at.value());
        CHECK(result.entry->original_uri == expect->original_uri);
        CHECK(result.entry->timestamp.value() == expect->timestamp.value());
        ++resolved_count;
    }
    CHECK(resolved_count > 400);  // the probe mix mostly hits captured paths
}

TEST_CASE("timemap aggregates all eras chronologically") {
    std::vector<warc::CdxEntry> entries;
    entries.push_back(capture(std::string("http://") + kHostA + "/", "20210105000000"));
    entries.push_back(capture(std::string("http://") + kHostB + "/", "20210405000000"));
    entries.push_back(capture(std::string("http://") + kHostA + "/", "20210205000000"));
    entries.push_back(capture(std::string("http://") + kHostB + "/", "20210505000000"));
    warc::CdxIndex index(std::move(entries));
    FakeCanon fake = two_era_canon();
    MementoResolver resolver(index, &fake);

    for (const char* host : {kHostA, kHostB}) {
        auto timemap = resolver.timemap_entries(
            canonicalize_uri(std::string("http://") + host + "/"));
        REQUIRE(timemap.size() == 4);
        std::set<std::string> originals;
        for (std::size_t i = 0; i < timemap.size(); ++i) {
            originals.insert(timemap[i].entry.original_uri);
            if (i > 0)
                CHECK(timemap[i - 1].entry.timestamp <= timemap[i].entry.timestamp);
        }
        CHECK(originals.size() == 2);
    }

    // degraded mode: single-URI timemap
    MementoResolver lonely(index, nullptr);
    CHECK(lonely.timemap_entries(canonicalize_uri(std::string("http://") + kHostA + "/")).size() ==
          2);

    // single-capture site renders with combined first/last rel
    warc::CdxIndex single(std::vector<warc::CdxEntry>{
        capture(std::string("http://") + kHostA + "/only", "20210105000000")});
    MementoResolver single_resolver(single, nullptr);
    auto single_entries = single_resolver.timemap_entries(
        canonicalize_uri(std::string("http://") + kHostA + "/only"));
    auto rendered = render_timemap(canonicalize_uri(std::string("http://") + kHostA + "/only"),
                                   canonicalize_uri(std::string("http://") + kHostA + "/only"),
                                   "http://127.0.0.1:1", "/replay", single_entries);
    auto links = parse_link_format(rendered);
    bool combined = false;
    for (const auto& link : links)
        if (link.attribute("rel") == "first last memento") combined = true;
    CHECK(combined);
}

TEST_CASE("timemap document parses under the link-format grammar") {
    std::vector<warc::CdxEntry> entries;
    entries.push_back(capture(std::string("http://") + kHostA + "/", "20210105000000"));
    entries.push_back(capture(std::string("http://") + kHostA + "/", "20210205000000"));
    entries.push_back(capture(std::string("http://") + kHostB + "/", "20210405000000"));
    warc::CdxIndex index(std::move(entries));
    FakeCanon fake = two_era_canon();
    MementoResolver resolver(index, &fake);

    auto target = canonicalize_uri(std::string("http://") + kHostA + "/");
    auto timemap_body = render_timemap(target, resolver.current_original(target),
                                       "http://127.0.0.1:9999", "/replay",
                                       resolver.timemap_entries(target));
    auto links = parse_link_format(timemap_body);
    REQUIRE(links.size() == 5);  // original + self + 3 mementos

    CHECK(links[0].attribute("rel") == "original");
    CHECK(links[0].uri == std::string("http://") + kHostB + "/");  // current era
    CHECK(links[1].attribute("rel") == "self");
    CHECK(links[1].attribute("type") == "application/link-format");

    int mementos = 0;
    for (const auto& link : links) {
        auto rel = link.attribute("rel");
        if (rel.find("memento") == std::string::npos) continue;
        ++mementos;
        // Memento-Datetime round-trips to the Timestamp14 in the URI-M
        auto datetime = link.attribute("datetime");
        UriM urim = UriM::parse(link.uri.substr(std::string("http://127.0.0.1:9999").size()),
                                "/replay");
        CHECK(urim.timestamp.rfc1123() == datetime);
    }
    CHECK(mementos == 3);

    CHECK_THROWS_AS(parse_link_format("<unterminated"), Error);
    CHECK_THROWS_AS(parse_link_format("<a> <b>"), Error);  // missing comma
}

TEST_CASE("replay service end to end over real WARC files") {
    auto dir = temp_dir("service");
    warc::WarcStore store(dir, {.gzip = false, .max_file_bytes = 1 << 30, .job_id = "rp"});

    std::string era1_page =
        "<html><body><a href=\"/about\">about</a><img src=\"logo.png\"></body></html>";
    std::string era2_page = "<html><body>era2 root</body></html>";
    std::string binary(64, '\x7f');
    binary += std::string("\x00\x01\x02", 3);

    auto first = warc::FirstObserved{canonicalize_uri(std::string("http://") + kHostA + "/"),
                                     canonicalize_uri(std::string("http://") + kHostB + "/"),
                                     "s000001"};
    store.write_capture(
        make_fetch(std::string("http://") + kHostA + "/", era1_page, "20210105000000",
                   "text/html; charset=utf-8"),
        first);
    store.write_capture(make_fetch(std::string("http://") + kHostA + "/logo.png", binary,
                                   "20210105000100", "image/png"),
                        first);
    store.write_capture(
        make_fetch(std::string("http://") + kHostB + "/", era2_page, "20210405000000",
                   "text/html; charset=utf-8"),
        first);

    FakeCanon fake = two_era_canon();
    ReplayService service({.bind_host = "127.0.0.1", .port = 0, .warc_dir = dir,
                           .replay_prefix = "/replay"},
                          store.index(), &fake);
    service.start();
    httplib::Client client("127.0.0.1", service.port());

    SUBCASE("identity mode returns stored payload bytes") {
        auto res = client.Get("/replay/20210105000000id_/http://" + std::string(kHostA) + "/");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->body == era1_page);
        CHECK(res->get_header_value("Memento-Datetime") == "Tue, 05 Jan 2021 00:00:00 GMT");
        auto link = res->get_header_value("Link");
        CHECK(link.find("rel=\"original\"") != std::string::npos);
        CHECK(link.find("rel=\"timemap\"") != std::string::npos);
        CHECK(link.find(std::string("http://") + kHostA + "/") != std::string::npos);
    }

    SUBCASE("rewritten mode rewrites html, leaves images alone") {
        auto res = client.Get("/replay/20210105000000/http://" + std::string(kHostA) + "/");
        REQUIRE(res);
        CHECK(res->body.find("/replay/20210105000000/http://" + std::string(kHostA) +
                             "/about") != std::string::npos);
        auto img = client.Get("/replay/20210105000000/http://" + std::string(kHostA) +
                              "/logo.png");
        REQUIRE(img);
        CHECK(img->body == binary);  // non-HTML payloads pass through untouched
    }

    SUBCASE("era substitution over HTTP") {
        auto res = client.Get("/replay/20210110000000id_/http://" + std::string(kHostB) + "/");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->body == era1_page);
        CHECK(res->get_header_value("X-Archive-Era-Substituted") == "1");

        auto trace = client.Get("/api/v1/lookup?uri=http://" + std::string(kHostB) +
                                "/&timestamp=20210110000000");
        REQUIRE(trace);
        auto j = json::parse(trace->body);
        CHECK(j.at("resolved").at("era_substituted") == true);
        CHECK(j.at("stages").size() >= 2);
    }

    SUBCASE("timemap over HTTP spans both eras") {
        auto res = client.Get("/timemap/link/http://" + std::string(kHostB) + "/");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->get_header_value("Content-Type") == "application/link-format");
        auto links = parse_link_format(res->body);
        int mementos = 0;
        for (const auto& link : links)
            if (link.attribute("rel").find("memento") != std::string::npos) ++mementos;
        CHECK(mementos == 2);  // both era roots
    }

    SUBCASE("404 lists tried eras") {
        auto res = client.Get("/replay/20210110000000/http://" + std::string(kHostB) +
                              "/missing");
        REQUIRE(res);
        CHECK(res->status == 404);
        auto j = json::parse(res->body);
        CHECK(j.at("error") == "not_in_archive");
        CHECK(j.at("tried").size() == 2);
    }

    SUBCASE("malformed replay paths are 400") {
        auto res = client.Get("/replay/banana/http://x.onion/");
        REQUIRE(res);
        CHECK(res->status == 400);
    }
}
