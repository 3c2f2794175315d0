#pragma once

// Internal tolerant HTML tag scanner shared by the crawler's link extractor
// and the replay rewriter. Walks start tags with their attribute byte spans,
// skipping comments and the bodies of <script>/<style> elements so inline
// content is never misread as markup.

#include <functional>
#include <string>
#include <vector>

namespace darc::htmlscan {

struct Attr {
    std::string name;   // lowercased
    std::string value;  // raw bytes, entities not decoded
    std::size_t value_begin = 0;  // byte span of the raw value in the input
    std::size_t value_end = 0;
};

struct Tag {
    std::string name;  // lowercased
    std::vector<Attr> attrs;

    const Attr* attr(const std::string& name) const {
        for (const auto& a : attrs)
            if (a.name == name) return &a;
        return nullptr;
    }
};

void scan_tags(const std::string& html, const std::function<void(const Tag&)>& callback);

/// Decodes the five named entities plus numeric references, which is all a
/// URL attribute realistically carries.
std::string decode_entities(const std::string& value);

std::string trim_ascii(const std::string& value);

}  // namespace darc::htmlscan
