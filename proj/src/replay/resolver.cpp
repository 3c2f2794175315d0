#include "darc/replay/resolver.hpp"

#include <algorithm>

#include "darc/error.hpp"

namespace darc::replay {

using nlohmann::json;

namespace {

CanonicalUri root_of(const CanonicalUri& uri) {
    CanonicalUri root = uri;
    root.path = "/";
    root.query.reset();
    root.port.reset();
    return root;
}

}  // namespace

std::vector<CanonicalUri> MementoResolver::era_candidates(const CanonicalUri& target,
                                                          const std::optional<Timestamp14>& at,
                                                          json* trace) const {
    std::vector<CanonicalUri> candidates{target};
    auto push_unique = [&](const CanonicalUri& uri) {
        if (std::find(candidates.begin(), candidates.end(), uri) == candidates.end())
            candidates.push_back(uri);
    };

    if (!canon_ || !target.onion_host()) {
        if (trace) (*trace)["canonicalizer"] = canon_ ? "not_applicable" : "not_configured";
        return candidates;
    }
    try {
        if (at) {
            if (auto era = canon_->at(root_of(target), *at)) {
                push_unique(target.with_host(era->host));
                if (trace) (*trace)["uri_at"] = era->render();
            }
        }
        if (auto info = canon_->timeline(root_of(target))) {
            json eras = json::array();
            for (const auto& entry : info->entries) {
                push_unique(target.with_host(entry.uri.host));
                eras.push_back(entry.uri.render());
            }
            if (trace) {
                (*trace)["site_id"] = info->site_id;
                (*trace)["timeline"] = eras;
            }
        } else if (trace) {
            (*trace)["canonicalizer"] = "unknown_uri";
        }
    } catch (const Error&) {
        // degraded: single-URI Wayback semantics
        if (trace) (*trace)["canonicalizer"] = "unreachable";
    }
    return candidates;
}

ResolveResult MementoResolver::resolve(const CanonicalUri& target, const Timestamp14& at) const {
    ResolveResult result;
    result.trace = json::object();
    result.trace["target"] = target.render();
    result.trace["timestamp"] = at.value();

    auto candidates = era_candidates(target, at, &result.trace);
    json stages = json::array();

    const warc::CdxEntry* best = nullptr;
    std::size_t best_candidate = 0;
    std::int64_t best_distance = 0;
    const std::int64_t want = at.epoch_seconds();

    std::vector<std::vector<warc::CdxEntry>> per_candidate;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        per_candidate.push_back(index_.all_for(candidates[i]));
        result.tried.push_back(candidates[i].render());
        stages.push_back(json{{"stage", i == 0 ? "direct" : "era_substituted"},
                              {"uri", candidates[i].render()},
                              {"captures", per_candidate.back().size()}});
    }
    result.trace["stages"] = stages;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (const auto& entry : per_candidate[i]) {
            std::int64_t d = entry.timestamp.epoch_seconds() - want;
            if (d < 0) d = -d;
            bool better = false;
            if (!best) {
                better = true;
            } else if (d != best_distance) {
                better = d < best_distance;
            } else if (entry.timestamp != best->timestamp) {
                better = entry.timestamp < best->timestamp;
            } else if (i != best_candidate) {
                better = i < best_candidate;
            } else {
                better = std::tie(entry.warc_file, entry.offset) <
                         std::tie(best->warc_file, best->offset);
            }
            if (better) {
                best = &entry;
                best_candidate = i;
                best_distance = d;
            }
        }
    }

    if (best) {
        result.entry = *best;
        result.era_substituted = best_candidate != 0;
        result.trace["resolved"] = json{{"uri", best->original_uri},
                                        {"timestamp", best->timestamp.value()},
                                        {"era_substituted", result.era_substituted},
                                        {"warc_file", best->warc_file},
                                        {"offset", best->offset}};
    }
    return result;
}

std::vector<MementoResolver::TimemapEntry> MementoResolver::timemap_entries(
    const CanonicalUri& target) const {
    auto candidates = era_candidates(target, std::nullopt, nullptr);
    std::vector<TimemapEntry> out;
    for (const auto& candidate : candidates) {
        for (auto& entry : index_.all_for(candidate)) out.push_back({std::move(entry)});
    }
    std::sort(out.begin(), out.end(), [](const TimemapEntry& a, const TimemapEntry& b) {
        return std::tie(a.entry.timestamp, a.entry.original_uri, a.entry.offset) <
               std::tie(b.entry.timestamp, b.entry.original_uri, b.entry.offset);
    });
    return out;
}

CanonicalUri MementoResolver::current_original(const CanonicalUri& target) const {
    if (canon_ && target.onion_host()) {
        try {
            if (auto current = canon_->current(root_of(target)))
                return target.with_host(current->second.host);
        } catch (const Error&) {
        }
    }
    return target;
}

}  // namespace darc::replay
