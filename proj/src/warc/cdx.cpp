#include "darc/warc/cdx.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "darc/error.hpp"
#include "darc/warc/io.hpp"

namespace darc::warc {

std::string CdxEntry::line() const {
    std::ostringstream out;
    out << searchable_key << ' ' << timestamp.value() << ' ' << original_uri << ' ' << digest
        << ' ' << status << ' ' << length << ' ' << offset << ' ' << warc_file;
    return out.str();
}

CdxEntry CdxEntry::parse_line(const std::string& line) {
    std::istringstream in(line);
    CdxEntry entry;
    std::string timestamp;
    if (!(in >> entry.searchable_key >> timestamp >> entry.original_uri >> entry.digest >>
          entry.status >> entry.length >> entry.offset >> entry.warc_file))
        raise(Errc::unparseable, "bad CDX line: " + line);
    entry.timestamp = Timestamp14::parse(timestamp);
    return entry;
}

CdxIndex::CdxIndex(std::vector<CdxEntry> entries) : entries_(std::move(entries)) { sort(); }

void CdxIndex::sort() {
    std::sort(entries_.begin(), entries_.end(),
              [](const CdxEntry& a, const CdxEntry& b) { return a.sort_key() < b.sort_key(); });
}

CdxIndex CdxIndex::build(const std::vector<std::filesystem::path>& warc_files) {
    std::vector<CdxEntry> entries;
    for (const auto& path : warc_files) {
        WarcReader reader(path);
        while (auto read = reader.next()) {
            const WarcRecord& record = read->record;
            if (record.kind() != RecordKind::response) continue;
            CdxEntry entry;
            CanonicalUri uri = canonicalize_uri(record.target_uri());
            entry.searchable_key = uri.surt_key();
            entry.timestamp = record.capture_time();
            entry.original_uri = uri.render();
            entry.digest = record.header("WARC-Payload-Digest").value_or("-");
            entry.status = record.http_status();
            entry.length = read->placement.length;
            entry.offset = read->placement.offset;
            entry.warc_file = path.filename().string();
            entries.push_back(std::move(entry));
        }
    }
    return CdxIndex(std::move(entries));
}

CdxIndex CdxIndex::load(const std::filesystem::path& cdx_file) {
    std::ifstream in(cdx_file);
    if (!in) raise(Errc::io_failure, "cannot open index: " + cdx_file.string());
    std::vector<CdxEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        entries.push_back(CdxEntry::parse_line(line));
    }
    return CdxIndex(std::move(entries));
}

void CdxIndex::save(const std::filesystem::path& cdx_file) const {
    std::ofstream out(cdx_file, std::ios::trunc);
    if (!out) raise(Errc::io_failure, "cannot write index: " + cdx_file.string());
    for (const auto& entry : entries_) out << entry.line() << '\n';
}

void CdxIndex::add(CdxEntry entry) {
    entries_.push_back(std::move(entry));
    sort();
}

void CdxIndex::add_all(const std::vector<CdxEntry>& entries) {
    entries_.insert(entries_.end(), entries.begin(), entries.end());
    sort();
}

std::vector<CdxEntry> CdxIndex::all_for(const CanonicalUri& uri) const {
    const std::string key = uri.surt_key();
    auto lower = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const CdxEntry& e, const std::string& k) { return e.searchable_key < k; });
    std::vector<CdxEntry> out;
    for (auto it = lower; it != entries_.end() && it->searchable_key == key; ++it)
        out.push_back(*it);
    return out;
}

const CdxEntry& CdxIndex::lookup(const CanonicalUri& uri, const Timestamp14& at) const {
    const std::string key = uri.surt_key();
    auto lower = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const CdxEntry& e, const std::string& k) { return e.searchable_key < k; });
    if (lower == entries_.end() || lower->searchable_key != key)
        raise(Errc::not_captured, "no capture of " + uri.render());

    const std::int64_t want = at.epoch_seconds();
    const CdxEntry* best = nullptr;
    std::int64_t best_distance = 0;
    for (auto it = lower; it != entries_.end() && it->searchable_key == key; ++it) {
        std::int64_t d = it->timestamp.epoch_seconds() - want;
        if (d < 0) d = -d;
        // strict < keeps the earlier entry on ties: entries are time-sorted
        if (!best || d < best_distance) {
            best = &*it;
            best_distance = d;
        }
    }
    return *best;
}

}  // namespace darc::warc
