#pragma once

// Randomized observation-log generator used by the canonicalizer property
// tests and the acceptance suite. Produces logs with configurable shift
// probability plus deliberate collision and out-of-order injections.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "darc/canon/types.hpp"

namespace testgen {

inline std::string random_onion_label(std::mt19937_64& rng, bool v3) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz234567";
    std::uniform_int_distribution<int> pick(0, 31);
    std::string label;
    int n = v3 ? 56 : 16;
    label.reserve(n);
    for (int i = 0; i < n; ++i) label += alphabet[pick(rng)];
    return label;
}

inline darc::CanonicalUri random_onion_root(std::mt19937_64& rng) {
    std::bernoulli_distribution v3(0.5);
    return darc::canonicalize_uri("http://" + random_onion_label(rng, v3(rng)) + ".onion/");
}

struct GenParams {
    int max_sites = 50;
    int max_observations = 200;
    double shift_prob = 0.1;
    double collision_prob = 0.08;
    double out_of_order_prob = 0.02;
    std::uint64_t seed = 1;
};

struct GeneratedLog {
    std::vector<darc::canon::Observation> observations;
};

// Tracks just enough ground truth to steer the generator; the rules
// themselves live in the engine and the oracle.
inline GeneratedLog generate_log(const GenParams& params) {
    std::mt19937_64 rng(params.seed);
    struct LiveSite {
        darc::CanonicalUri current;
        std::vector<darc::CanonicalUri> retired;
        std::vector<darc::canon::AliasPair> pairs;
    };
    std::vector<LiveSite> live;
    GeneratedLog log;
    std::int64_t now = darc::Timestamp14::parse("20200101000000").epoch_seconds();
    std::uniform_int_distribution<std::int64_t> step(1, 72000);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int serial = 0;

    auto fresh_pair = [&](const char* src) {
        return darc::canon::AliasPair{src, "site-" + std::to_string(++serial)};
    };
    auto pick_site = [&]() -> LiveSite& {
        std::uniform_int_distribution<std::size_t> d(0, live.size() - 1);
        return live[d(rng)];
    };

    for (int i = 0; i < params.max_observations; ++i) {
        now += step(rng);
        auto t = darc::Timestamp14::from_epoch_seconds(now);
        double roll = coin(rng);

        if (live.empty() || (roll < 0.18 && static_cast<int>(live.size()) < params.max_sites)) {
            LiveSite site{random_onion_root(rng), {}, {fresh_pair("github")}};
            log.observations.push_back({site.current, site.pairs[0].source,
                                        site.pairs[0].alias, t});
            live.push_back(std::move(site));
            continue;
        }
        roll -= 0.18;

        if (roll < params.shift_prob) {
            LiveSite& site = pick_site();
            site.retired.push_back(site.current);
            site.current = random_onion_root(rng);
            const auto& pair = site.pairs[0];
            log.observations.push_back({site.current, pair.source, pair.alias, t});
            continue;
        }
        roll -= params.shift_prob;

        if (roll < params.collision_prob) {
            LiveSite& site = pick_site();
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
                case 0:
                    // retired-address reuse under a fresh pair
                    if (!site.retired.empty()) {
                        auto pair = fresh_pair("wiki");
                        log.observations.push_back(
                            {site.retired.front(), pair.source, pair.alias, t});
                        continue;
                    }
                    [[fallthrough]];
                case 1: {
                    // cross-source alias reuse with a brand-new address
                    auto& pair = site.pairs[0];
                    log.observations.push_back(
                        {random_onion_root(rng), pair.source + "-mirror", pair.alias, t});
                    continue;
                }
                default: {
                    // simultaneous change: one site's URI with another's pair
                    if (live.size() >= 2) {
                        LiveSite& other = pick_site();
                        if (&other != &site) {
                            auto& pair = other.pairs[0];
                            log.observations.push_back(
                                {site.current, pair.source, pair.alias, t});
                            continue;
                        }
                    }
                    break;
                }
            }
        }
        roll -= params.collision_prob;

        if (roll < params.out_of_order_prob && !log.observations.empty()) {
            // stale timestamp for a site observed before
            LiveSite& site = pick_site();
            auto& pair = site.pairs[0];
            auto stale = darc::Timestamp14::from_epoch_seconds(
                darc::Timestamp14::parse("20190101000000").epoch_seconds());
            log.observations.push_back({site.current, pair.source, pair.alias, stale});
            continue;
        }

        // plain re-observation; sometimes introduces a new alias pair for the
        // same current address (always merged by rule 1)
        LiveSite& site = pick_site();
        if (coin(rng) < 0.25) {
            auto pair = fresh_pair("list");
            site.pairs.push_back(pair);
            log.observations.push_back({site.current, pair.source, pair.alias, t});
        } else {
            std::uniform_int_distribution<std::size_t> d(0, site.pairs.size() - 1);
            const auto& pair = site.pairs[d(rng)];
            log.observations.push_back({site.current, pair.source, pair.alias, t});
        }
    }
    return log;
}

}  // namespace testgen
