#include "darc/ingest/source.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "darc/error.hpp"

namespace darc::ingest {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_started = false;

    std::size_t i = 0;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
    };

    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            cell += c;
            ++i;
            continue;
        }
        if (c == '"' && !cell_started && cell.empty()) {
            quoted = true;
            cell_started = true;
            ++i;
            continue;
        }
        if (c == ',') {
            end_cell();
            ++i;
            continue;
        }
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_row();
            i += 2;
            continue;
        }
        if (c == '\n' || c == '\r') {
            end_row();
            ++i;
            continue;
        }
        cell += c;
        cell_started = true;
        ++i;
    }
    if (cell_started || !cell.empty() || !row.empty()) end_row();
    // drop fully empty trailing rows
    while (!rows.empty() && rows.back().size() == 1 && rows.back()[0].empty()) rows.pop_back();
    return rows;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& wanted) {
    // numeric strings address columns by 0-based position
    if (!wanted.empty() &&
        std::all_of(wanted.begin(), wanted.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
        std::size_t index = std::stoul(wanted);
        if (index >= header.size())
            raise(Errc::missing_column,
                  "column index " + wanted + " out of range (header has " +
                      std::to_string(header.size()) + " columns)");
        return index;
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == wanted) return i;
    }
    raise(Errc::missing_column, "no column named '" + wanted + "' in header");
}

}  // namespace

ParseResult parse_list_text(const std::string& text, const SourceSpec& spec) {
    if (!spec.time_column && !spec.default_observed_at)
        raise(Errc::no_timestamp, "source '" + spec.source_tag +
                                      "' maps no timestamp column and has no default");

    ParseResult result;
    auto rows = parse_csv(text);
    if (rows.empty()) return result;

    const auto& header = rows.front();
    std::size_t alias_at = column_index(header, spec.alias_column);
    std::size_t uri_at = column_index(header, spec.uri_column);
    std::optional<std::size_t> time_at;
    if (spec.time_column) time_at = column_index(header, *spec.time_column);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t needed = std::max(alias_at, uri_at);
        if (time_at) needed = std::max(needed, *time_at);
        if (row.size() <= needed) {
            result.issues.push_back({r, "short_row",
                                     "have " + std::to_string(row.size()) + " cells"});
            continue;
        }

        canon::Observation obs;
        obs.source = spec.source_tag;
        obs.alias = row[alias_at];
        try {
            obs.uri = canonicalize_uri(row[uri_at]);
        } catch (const Error& e) {
            result.issues.push_back({r, "bad_uri", row[uri_at] + ": " + e.what()});
            continue;
        }
        if (!obs.uri.onion_host()) {
            result.issues.push_back({r, "not_onion", row[uri_at]});
            continue;
        }
        if (obs.alias.empty()) {
            result.issues.push_back({r, "empty_alias", ""});
            continue;
        }

        if (time_at && !row[*time_at].empty()) {
            try {
                obs.observed_at = Timestamp14::parse(row[*time_at]);
            } catch (const Error& e) {
                result.issues.push_back({r, "bad_timestamp", row[*time_at]});
                continue;
            }
        } else if (spec.default_observed_at) {
            obs.observed_at = *spec.default_observed_at;
        } else {
            result.issues.push_back({r, "no_timestamp", "row has empty timestamp cell"});
            continue;
        }
        result.observations.push_back(std::move(obs));
    }
    return result;
}

ParseResult parse_list(const std::filesystem::path& file, const SourceSpec& spec) {
    std::ifstream in(file, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_list_text(text, spec);
}

DiffResult diff_lists(const std::vector<canon::Observation>& old_list,
                      const std::vector<canon::Observation>& new_list) {
    auto tag_of = [](const std::vector<canon::Observation>& list) -> std::optional<std::string> {
        if (list.empty()) return std::nullopt;
        for (const auto& obs : list) {
            if (obs.source != list.front().source)
                raise(Errc::unparseable, "list mixes source tags: " + list.front().source +
                                             " and " + obs.source);
        }
        return list.front().source;
    };
    auto old_tag = tag_of(old_list);
    auto new_tag = tag_of(new_list);
    if (old_tag && new_tag && *old_tag != *new_tag)
        raise(Errc::unparseable,
              "diffing lists from different sources: " + *old_tag + " vs " + *new_tag);

    std::map<std::string, const canon::Observation*> old_by_alias;
    for (const auto& obs : old_list) old_by_alias[obs.alias] = &obs;

    DiffResult result;
    std::map<std::string, const canon::Observation*> new_by_alias;
    for (const auto& obs : new_list) new_by_alias[obs.alias] = &obs;

    for (const auto& [alias, obs] : new_by_alias) {
        auto it = old_by_alias.find(alias);
        if (it == old_by_alias.end() || !(it->second->uri == obs->uri))
            result.emitted.push_back(*obs);
    }
    for (const auto& [alias, obs] : old_by_alias) {
        if (!new_by_alias.count(alias)) result.removed_aliases.push_back(alias);
    }
    return result;
}

}  // namespace darc::ingest
