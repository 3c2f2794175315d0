#include "darc/crawl/link_extract.hpp"

#include <algorithm>

#include "darc/error.hpp"
#include "html_scan.hpp"

namespace darc::crawl {

namespace {

bool is_html(const std::string& content_type) {
    std::string lower = content_type;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower.find("text/html") != std::string::npos ||
           lower.find("application/xhtml") != std::string::npos;
}

}  // namespace

const char* link_role_name(LinkRole role) noexcept {
    return role == LinkRole::navigation ? "navigation" : "embedded";
}

std::vector<ExtractedLink> extract_links(const std::string& body, const std::string& content_type,
                                         const CanonicalUri& base) {
    std::vector<ExtractedLink> out;
    if (!is_html(content_type)) return out;

    CanonicalUri effective_base = base;
    bool base_seen = false;

    htmlscan::scan_tags(body, [&](const htmlscan::Tag& tag) {
        const htmlscan::Attr* attr = nullptr;
        LinkRole role = LinkRole::navigation;
        if (tag.name == "a") {
            attr = tag.attr("href");
            role = LinkRole::navigation;
        } else if (tag.name == "link") {
            attr = tag.attr("href");
            role = LinkRole::embedded;
        } else if (tag.name == "img" || tag.name == "script" || tag.name == "source") {
            attr = tag.attr("src");
            role = LinkRole::embedded;
        } else if (tag.name == "base" && !base_seen) {
            if (const auto* href = tag.attr("href")) {
                try {
                    effective_base = resolve_reference(
                        base, htmlscan::trim_ascii(htmlscan::decode_entities(href->value)));
                    base_seen = true;
                } catch (const Error&) {
                }
            }
            return;
        }
        if (!attr) return;
        std::string reference = htmlscan::trim_ascii(htmlscan::decode_entities(attr->value));
        if (reference.empty() || reference[0] == '#') return;
        try {
            out.push_back({resolve_reference(effective_base, reference), role});
        } catch (const Error&) {
            // mailto:, javascript:, data:, malformed — not crawlable
        }
    });
    return out;
}

}  // namespace darc::crawl
