#include "darc/replay/rewrite.hpp"

#include <vector>

#include "crawl/html_scan.hpp"
#include "darc/error.hpp"

namespace darc::replay {

namespace {

struct Span {
    std::size_t begin;
    std::size_t end;
    std::string replacement;
};

bool has_scheme(const std::string& ref, std::string* scheme_out) {
    if (ref.empty() || !std::isalpha(static_cast<unsigned char>(ref[0]))) return false;
    std::size_t i = 0;
    while (i < ref.size() &&
           (std::isalnum(static_cast<unsigned char>(ref[i])) || ref[i] == '+' || ref[i] == '-' ||
            ref[i] == '.'))
        ++i;
    if (i < ref.size() && ref[i] == ':') {
        std::string scheme = ref.substr(0, i);
        for (char& c : scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        *scheme_out = scheme;
        return true;
    }
    return false;
}

}  // namespace

std::string rewrite_links(const std::string& html, const UriM& context) {
    std::vector<Span> spans;
    CanonicalUri base = context.target;
    bool base_seen = false;

    htmlscan::scan_tags(html, [&](const htmlscan::Tag& tag) {
        for (const char* name : {"href", "src"}) {
            const auto* attr = tag.attr(name);
            if (!attr || attr->value_end <= attr->value_begin) continue;
            std::string ref = htmlscan::trim_ascii(htmlscan::decode_entities(attr->value));
            if (ref.empty() || ref[0] == '#') continue;
            std::string scheme;
            if (has_scheme(ref, &scheme) && scheme != "http" && scheme != "https")
                continue;  // mailto:, javascript:, data: stay untouched

            CanonicalUri absolute;
            try {
                absolute = resolve_reference(base, ref);
            } catch (const Error&) {
                continue;
            }
            if (tag.name == "base" && !base_seen) {
                base = absolute;
                base_seen = true;
            }
            spans.push_back({attr->value_begin, attr->value_end,
                             context.replay_prefix + "/" + context.timestamp.value() + "/" +
                                 absolute.render()});
        }
    });

    std::string out;
    out.reserve(html.size());
    std::size_t cursor = 0;
    for (const auto& span : spans) {
        out.append(html, cursor, span.begin - cursor);
        out += span.replacement;
        cursor = span.end;
    }
    out.append(html, cursor, html.size() - cursor);
    return out;
}

}  // namespace darc::replay
