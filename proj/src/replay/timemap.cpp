#include "darc/replay/timemap.hpp"

#include "darc/error.hpp"

namespace darc::replay {

std::string render_timemap(const CanonicalUri& request_uri, const CanonicalUri& original,
                           const std::string& service_base, const std::string& replay_prefix,
                           const std::vector<MementoResolver::TimemapEntry>& entries) {
    std::string out;
    out += "<" + original.render() + ">;rel=\"original\",\n";
    out += "<" + service_base + "/timemap/link/" + request_uri.render() +
           ">;rel=\"self\";type=\"application/link-format\"";
    if (!entries.empty()) {
        out += ";from=\"" + entries.front().entry.timestamp.rfc1123() + "\"";
        out += ";until=\"" + entries.back().entry.timestamp.rfc1123() + "\"";
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& entry = entries[i].entry;
        std::string rel = "memento";
        if (entries.size() == 1) {
            rel = "first last memento";
        } else if (i == 0) {
            rel = "first memento";
        } else if (i + 1 == entries.size()) {
            rel = "last memento";
        }
        out += ",\n<" + service_base + replay_prefix + "/" + entry.timestamp.value() + "/" +
               entry.original_uri + ">;rel=\"" + rel + "\";datetime=\"" +
               entry.timestamp.rfc1123() + "\"";
    }
    out += "\n";
    return out;
}

std::vector<TimemapLink> parse_link_format(const std::string& text) {
    std::vector<TimemapLink> links;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n'))
            ++i;
    };

    while (true) {
        skip_ws();
        if (i >= n) break;
        if (text[i] != '<') raise(Errc::unparseable, "link-format: expected '<'");
        auto close = text.find('>', i);
        if (close == std::string::npos) raise(Errc::unparseable, "link-format: missing '>'");
        TimemapLink link;
        link.uri = text.substr(i + 1, close - i - 1);
        i = close + 1;

        // parameters: ;name="value" or ;name=token
        while (true) {
            skip_ws();
            if (i >= n || text[i] != ';') break;
            ++i;
            skip_ws();
            std::string name;
            while (i < n && text[i] != '=' && text[i] != ';' && text[i] != ',') name += text[i++];
            std::string value;
            if (i < n && text[i] == '=') {
                ++i;
                if (i < n && text[i] == '"') {
                    ++i;
                    while (i < n && text[i] != '"') value += text[i++];
                    if (i >= n) raise(Errc::unparseable, "link-format: unterminated string");
                    ++i;
                } else {
                    while (i < n && text[i] != ';' && text[i] != ',' &&
                           !std::isspace(static_cast<unsigned char>(text[i])))
                        value += text[i++];
                }
            }
            link.attributes.emplace_back(name, value);
        }
        links.push_back(std::move(link));
        skip_ws();
        if (i >= n) break;
        if (text[i] != ',') raise(Errc::unparseable, "link-format: expected ','");
        ++i;
    }
    return links;
}

}  // namespace darc::replay
