#include <random>

#include "darc/canon/engine.hpp"
#include "darc/error.hpp"
#include "doctest.h"
#include "support/canon_oracle.hpp"
#include "support/obs_gen.hpp"

using namespace darc;
using namespace darc::canon;

namespace {

Observation obs(const std::string& uri, const std::string& source, const std::string& alias,
                const std::string& t) {
    return {canonicalize_uri(uri), source, alias, Timestamp14::parse(t)};
}

template <typename Fn>
Errc error_code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a darc::Error");
    throw;
}

const char* kBuzzfeed = "https://bfnews3u2ox4m4ty.onion/";
const char* kBuzzfeed2 = "https://bfnewsx2qcqbkgqx.onion/";  // post-shift address
const char* kOther = "http://zqktlwi4fecvo6ri.onion/";

}  // namespace

TEST_CASE("register_observation walks the four rules") {
    Engine engine;

    auto first = engine.register_observation(
        obs(kBuzzfeed, "github", "Buzzfeed News", "20200101000000"));
    REQUIRE(std::holds_alternative<NewSite>(first));
    auto site_id = std::get<NewSite>(first).site_id;

    SUBCASE("same URI, new (source, alias) merges aliases (rule 1)") {
        auto merged = engine.register_observation(
            obs(kBuzzfeed, "wiki", "BF News", "20200102000000"));
        REQUIRE(std::holds_alternative<Known>(merged));
        CHECK(std::get<Known>(merged).site_id == site_id);
        const auto& site = engine.sites().at(site_id);
        CHECK(site.aliases.size() == 2);
        CHECK(site.timeline.entries.size() == 1);
        CHECK(site.timeline.current().last_seen.value() == "20200102000000");
    }

    SUBCASE("fresh URI with a known pair shifts (rule 2)") {
        auto shifted = engine.register_observation(
            obs(kBuzzfeed2, "github", "Buzzfeed News", "20200201000000"));
        REQUIRE(std::holds_alternative<Shift>(shifted));
        const auto& event = std::get<Shift>(shifted).event;
        CHECK(event.site_id == site_id);
        CHECK(event.from_uri.render() == kBuzzfeed);
        CHECK(event.to_uri.render() == kBuzzfeed2);
        const auto& timeline = engine.sites().at(site_id).timeline;
        REQUIRE(timeline.entries.size() == 2);
        // the retired era keeps its last sighting
        CHECK(timeline.entries[0].last_seen.value() == "20200101000000");
        CHECK(timeline.entries[1].first_seen.value() == "20200201000000");
    }

    SUBCASE("unknown URI and unknown pair makes a new site (rule 3)") {
        auto fresh = engine.register_observation(
            obs(kOther, "wiki", "Dark Wiki", "20200103000000"));
        REQUIRE(std::holds_alternative<NewSite>(fresh));
        CHECK(std::get<NewSite>(fresh).site_id != site_id);
    }

    SUBCASE("retired URI under a fresh pair collides (rule 4)") {
        engine.register_observation(obs(kBuzzfeed2, "github", "Buzzfeed News", "20200201000000"));
        auto collided = engine.register_observation(
            obs(kBuzzfeed, "paste", "Some Mirror", "20200301000000"));
        REQUIRE(std::holds_alternative<Collision>(collided));
        auto pending = engine.list_pending();
        REQUIRE(pending.size() == 1);
        CHECK(pending[0].candidate_sites == std::vector<std::string>{site_id});
        // nothing mutated
        CHECK(engine.sites().size() == 1);
        CHECK(engine.sites().at(site_id).timeline.entries.size() == 2);
    }

    SUBCASE("simultaneous URI+pair conflict collides (rule 4)") {
        auto other = engine.register_observation(
            obs(kOther, "wiki", "Dark Wiki", "20200103000000"));
        auto outcome = engine.register_observation(
            obs(kBuzzfeed, "wiki", "Dark Wiki", "20200104000000"));
        REQUIRE(std::holds_alternative<Collision>(outcome));
        auto pending = engine.list_pending();
        REQUIRE(pending.size() == 1);
        std::vector<std::string> expect{site_id, std::get<NewSite>(other).site_id};
        std::sort(expect.begin(), expect.end());
        CHECK(pending[0].candidate_sites == expect);
    }

    SUBCASE("alias reuse across sources with a fresh URI collides (rule 4)") {
        auto outcome = engine.register_observation(
            obs(kBuzzfeed2, "wiki", "Buzzfeed News", "20200105000000"));
        REQUIRE(std::holds_alternative<Collision>(outcome));
    }

    SUBCASE("out-of-order observations are rejected") {
        CHECK(error_code_of([&] {
                  engine.register_observation(
                      obs(kBuzzfeed, "github", "Buzzfeed News", "20191231000000"));
              }) == Errc::out_of_order);
    }

    SUBCASE("surface hosts are rejected at ingest") {
        CHECK(error_code_of([&] {
                  engine.register_observation(
                      obs("http://example.com/", "github", "Surface", "20200110000000"));
              }) == Errc::not_onion);
        CHECK(error_code_of([&] {
                  engine.register_observation({canonicalize_uri(kOther), "", "x",
                                               Timestamp14::parse("20200110000000")});
              }) == Errc::unparseable);
    }
}

TEST_CASE("scheme and subdomain variants of one address are the same site") {
    Engine engine;
    auto a = engine.register_observation(obs(kBuzzfeed, "github", "BF", "20200101000000"));
    auto b = engine.register_observation(
        obs("http://www.bfnews3u2ox4m4ty.onion/", "wiki", "BF w", "20200102000000"));
    CHECK(std::get<Known>(b).site_id == std::get<NewSite>(a).site_id);
}

TEST_CASE("current_uri resolves both eras") {
    Engine engine;
    engine.register_observation(obs(kBuzzfeed, "github", "BF", "20200101000000"));
    engine.register_observation(obs(kBuzzfeed2, "github", "BF", "20200201000000"));

    auto from_prior = engine.current_uri(canonicalize_uri(kBuzzfeed));
    CHECK(from_prior.second.render() == kBuzzfeed2);
    auto from_current = engine.current_uri(canonicalize_uri(kBuzzfeed2));
    CHECK(from_current.second.render() == kBuzzfeed2);
    CHECK(from_prior.first == from_current.first);

    CHECK(error_code_of([&] {
              engine.current_uri(canonicalize_uri("http://aaaaaaaaaaaaaaaa.onion/"));
          }) == Errc::unknown_uri);
}

TEST_CASE("timeline_for is era-independent; uri_at follows the interval rule") {
    Engine engine;
    engine.register_observation(obs(kBuzzfeed, "github", "BF", "20200101000000"));
    engine.register_observation(obs(kBuzzfeed, "github", "BF", "20200115000000"));
    engine.register_observation(obs(kBuzzfeed2, "github", "BF", "20200201000000"));

    auto by_old = engine.timeline_for(canonicalize_uri(kBuzzfeed));
    auto by_new = engine.timeline_for(canonicalize_uri(kBuzzfeed2));
    CHECK(by_old == by_new);
    REQUIRE(by_old.entries.size() == 2);

    CHECK(engine.uri_at(canonicalize_uri(kBuzzfeed2), Timestamp14::parse("20200110000000"))
              .render() == kBuzzfeed);
    CHECK(engine.uri_at(canonicalize_uri(kBuzzfeed), Timestamp14::parse("20200301000000"))
              .render() == kBuzzfeed2);
    // before the first observation: first era
    CHECK(engine.uri_at(canonicalize_uri(kBuzzfeed), Timestamp14::parse("20190101000000"))
              .render() == kBuzzfeed);
    // boundary: exactly at the shift instant the new era owns the query
    CHECK(engine.uri_at(canonicalize_uri(kBuzzfeed), Timestamp14::parse("20200201000000"))
              .render() == kBuzzfeed2);
}

TEST_CASE("uri_at matches a brute-force interval scan on random timelines") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 50; ++round) {
        Engine engine;
        std::vector<std::pair<std::string, std::string>> eras;  // (uri, first_seen)
        std::int64_t now = Timestamp14::parse("20200101000000").epoch_seconds();
        int n_eras = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int e = 0; e < n_eras; ++e) {
            auto uri = testgen::random_onion_root(rng);
            auto t = Timestamp14::from_epoch_seconds(now);
            engine.register_observation({uri, "github", "S", t});
            eras.push_back({uri.render(), t.value()});
            now += std::uniform_int_distribution<std::int64_t>(3600, 8640000)(rng);
        }
        auto query_uri = canonicalize_uri(eras.front().first);
        for (int q = 0; q < 40; ++q) {
            auto at = Timestamp14::from_epoch_seconds(
                Timestamp14::parse("20190101000000").epoch_seconds() +
                std::uniform_int_distribution<std::int64_t>(0, 2LL * 365 * 86400)(rng));
            // linear scan oracle
            std::string expect = eras.front().first;
            for (const auto& [uri, first_seen] : eras) {
                if (first_seen <= at.value()) expect = uri;
            }
            CHECK(engine.uri_at(query_uri, at).render() == expect);
        }
    }
}

TEST_CASE("pending list and resolution") {
    Engine engine;
    auto s1 = std::get<NewSite>(engine.register_observation(
                                    obs(kBuzzfeed, "github", "BF", "20200101000000")))
                  .site_id;
    engine.register_observation(obs(kBuzzfeed2, "github", "BF", "20200201000000"));
    CHECK(engine.list_pending().empty());

    auto outcome = engine.register_observation(obs(kBuzzfeed, "paste", "Mirror", "20200301000000"));
    auto collision_id = std::get<Collision>(outcome).collision_id;
    REQUIRE(engine.list_pending().size() == 1);

    SUBCASE("resolve as new site applies NewSite semantics") {
        auto created = engine.resolve_collision(collision_id, AsNewSite{});
        CHECK(created != s1);
        CHECK(engine.sites().at(created).timeline.entries.size() == 1);
        CHECK(engine.sites().at(created).timeline.current().uri.render() == kBuzzfeed);
        CHECK(engine.list_pending().empty());
        // The address now answers for the new site.
        CHECK(engine.current_uri(canonicalize_uri(kBuzzfeed)).first == created);
    }

    SUBCASE("resolve as merge applies a shift to the named site") {
        auto into = engine.resolve_collision(collision_id, MergeInto{s1});
        CHECK(into == s1);
        const auto& site = engine.sites().at(s1);
        CHECK(site.timeline.entries.size() == 3);
        CHECK(site.timeline.current().uri.render() == kBuzzfeed);
        CHECK(site.aliases.count({"paste", "Mirror"}) == 1);
        CHECK(engine.shift_history().size() == 2);
    }

    SUBCASE("merge with a current-URI match is Known") {
        auto second = engine.register_observation(
            obs(kBuzzfeed2, "forum", "BF Forum", "20200401000000"));
        // kBuzzfeed2 is current for s1, "BF Forum" unknown -> rule 1 merge...
        REQUIRE(std::holds_alternative<Known>(second));
        auto third = engine.register_observation(obs(kOther, "forum", "BF Forum",
                                                     "20200501000000"));
        // fresh URI + known pair would shift; park it via alias conflict instead
        REQUIRE(std::holds_alternative<Shift>(third));
    }

    SUBCASE("double resolution is rejected") {
        engine.resolve_collision(collision_id, AsNewSite{});
        CHECK(error_code_of([&] { engine.resolve_collision(collision_id, AsNewSite{}); }) ==
              Errc::already_resolved);
    }

    SUBCASE("unknown ids are rejected") {
        CHECK(error_code_of([&] { engine.resolve_collision("c999999", AsNewSite{}); }) ==
              Errc::unknown_collision);
        CHECK(error_code_of([&] {
                  engine.resolve_collision(collision_id, MergeInto{"s999999"});
              }) == Errc::unknown_site);
    }

    SUBCASE("merge that would steal a current address is a conflict") {
        auto other = engine.register_observation(
            obs(kOther, "wiki", "Dark Wiki", "20200401000000"));
        auto bad = engine.register_observation(
            obs(kOther, "github", "BF", "20200501000000"));  // rule-1 conflict collision
        auto bad_id = std::get<Collision>(bad).collision_id;
        CHECK(error_code_of([&] {
                  engine.resolve_collision(bad_id, MergeInto{s1});
              }) == Errc::conflict);
        (void)other;
    }
}

TEST_CASE("engine state equals the brute-force oracle over randomized logs") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        testgen::GenParams params;
        params.seed = seed;
        auto log = testgen::generate_log(params);

        Engine engine;
        oracle::CanonOracle oracle_engine;
        for (const auto& observation : log.observations) {
            std::string engine_kind, oracle_kind;
            try {
                engine_kind = outcome_kind(engine.register_observation(observation));
            } catch (const Error& e) {
                engine_kind = std::string("error:") + e.code_name();
            }
            try {
                oracle_kind = oracle_engine.apply(observation);
            } catch (const Error& e) {
                oracle_kind = std::string("error:") + e.code_name();
            }
            REQUIRE(engine_kind == oracle_kind);
        }
        CAPTURE(seed);
        CHECK(oracle::dump_engine(engine) == oracle_engine.dump());
    }
}

TEST_CASE("properties over random logs") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        testgen::GenParams params;
        params.seed = seed;
        params.out_of_order_prob = 0.0;
        auto log = testgen::generate_log(params);

        Engine engine;
        for (const auto& observation : log.observations) {
            RegisterOutcome outcome;
            try {
                outcome = engine.register_observation(observation);
            } catch (const Error&) {
                continue;
            }
            if (!std::holds_alternative<Collision>(outcome)) {
                // round trip: the engine now owns obs.uri
                auto [site_id, current] = engine.current_uri(observation.uri);
                const auto& site = engine.sites().at(site_id);
                bool owns = false;
                for (const auto& entry : site.timeline.entries) {
                    if (entry.uri.onion_host()->label() ==
                        observation.uri.onion_host()->label())
                        owns = true;
                }
                CHECK(owns);
            }
        }

        // address uniqueness: at any instant each address maps to at most one site
        std::map<std::string, int> current_owners;
        std::size_t total_entries = 0;
        for (const auto& [id, site] : engine.sites()) {
            total_entries += site.timeline.entries.size();
            current_owners[site.timeline.current().uri.onion_host()->label()]++;
            // timeline well-formedness
            for (std::size_t i = 0; i < site.timeline.entries.size(); ++i) {
                const auto& e = site.timeline.entries[i];
                CHECK(e.first_seen <= e.last_seen);
                if (i > 0) {
                    CHECK(site.timeline.entries[i - 1].first_seen < e.first_seen);
                    CHECK(site.timeline.entries[i - 1].uri != e.uri);
                }
            }
            // uri_at stays within the timeline
            for (const auto& probe :
                 {"20190601000000", "20200601000000", "20210101000000"}) {
                auto at = engine.uri_at(site.timeline.current().uri, Timestamp14::parse(probe));
                bool member = false;
                for (const auto& entry : site.timeline.entries)
                    if (entry.uri == at) member = true;
                CHECK(member);
            }
        }
        for (const auto& [label, count] : current_owners) CHECK(count == 1);

        // shifts per site = entries - 1
        std::map<std::string, std::size_t> shift_counts;
        for (const auto& event : engine.shift_history()) shift_counts[event.site_id]++;
        for (const auto& [id, site] : engine.sites())
            CHECK(shift_counts[id] == site.timeline.entries.size() - 1);
        (void)total_entries;
    }
}

TEST_CASE("alias-merge property: same uri under two pairs yields one site with both") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        Engine engine;
        auto root = testgen::random_onion_root(rng);
        engine.register_observation({root, "github", "Name A", Timestamp14::parse("20200101000000")});
        engine.register_observation({root, "wiki", "Name B", Timestamp14::parse("20200102000000")});
        REQUIRE(engine.sites().size() == 1);
        const auto& site = engine.sites().begin()->second;
        CHECK(site.aliases.count({"github", "Name A"}) == 1);
        CHECK(site.aliases.count({"wiki", "Name B"}) == 1);
    }
}
