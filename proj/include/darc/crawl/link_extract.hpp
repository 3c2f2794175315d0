#pragma once

#include <string>
#include <vector>

#include "darc/core/uri.hpp"
#include "darc/crawl/types.hpp"

namespace darc::crawl {

struct ExtractedLink {
    CanonicalUri uri;
    LinkRole role = LinkRole::navigation;

    bool operator==(const ExtractedLink&) const = default;
};

/// Best-effort static extraction from HTML bodies: anchors become navigation
/// links, img/link/script/source references become embedded requisites.
/// Relative references are resolved against `base` (honoring <base href>),
/// results are canonicalized, and anything unresolvable is dropped. Non-HTML
/// content types yield nothing. Script bodies are never executed or scanned.
std::vector<ExtractedLink> extract_links(const std::string& body, const std::string& content_type,
                                         const CanonicalUri& base);

}  // namespace darc::crawl
