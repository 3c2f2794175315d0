#include "html_scan.hpp"

#include <algorithm>
#include <cctype>

namespace darc::htmlscan {

namespace {

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// case-insensitive search for a literal needle
std::size_t ifind(const std::string& haystack, const char* needle, std::size_t from) {
    std::size_t n = std::char_traits<char>::length(needle);
    if (n == 0 || haystack.size() < n) return std::string::npos;
    for (std::size_t i = from; i + n <= haystack.size(); ++i) {
        bool hit = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (lower(haystack[i + k]) != lower(needle[k])) {
                hit = false;
                break;
            }
        }
        if (hit) return i;
    }
    return std::string::npos;
}

}  // namespace

std::string trim_ascii(const std::string& value) {
    std::size_t begin = 0, end = value.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(value[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(value[end - 1]))) --end;
    return value.substr(begin, end - begin);
}

std::string decode_entities(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    std::size_t i = 0;
    while (i < value.size()) {
        if (value[i] != '&') {
            out += value[i++];
            continue;
        }
        auto semi = value.find(';', i);
        if (semi == std::string::npos || semi - i > 8) {
            out += value[i++];
            continue;
        }
        std::string entity = value.substr(i + 1, semi - i - 1);
        if (entity == "amp") out += '&';
        else if (entity == "lt") out += '<';
        else if (entity == "gt") out += '>';
        else if (entity == "quot") out += '"';
        else if (entity == "apos") out += '\'';
        else if (!entity.empty() && entity[0] == '#') {
            long code = 0;
            bool ok = true;
            if (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X')) {
                for (std::size_t k = 2; k < entity.size() && ok; ++k) {
                    char c = lower(entity[k]);
                    if (c >= '0' && c <= '9') code = code * 16 + (c - '0');
                    else if (c >= 'a' && c <= 'f') code = code * 16 + (c - 'a' + 10);
                    else ok = false;
                }
            } else {
                for (std::size_t k = 1; k < entity.size() && ok; ++k) {
                    if (std::isdigit(static_cast<unsigned char>(entity[k])))
                        code = code * 10 + (entity[k] - '0');
                    else
                        ok = false;
                }
            }
            if (!ok || code <= 0 || code > 127) {  // URL attributes: ASCII only
                out += value[i++];
                continue;
            }
            out += static_cast<char>(code);
        } else {
            out += value[i++];
            continue;
        }
        i = semi + 1;
    }
    return out;
}

void scan_tags(const std::string& html, const std::function<void(const Tag&)>& callback) {
    std::size_t i = 0;
    const std::size_t n = html.size();
    while (i < n) {
        auto open = html.find('<', i);
        if (open == std::string::npos) return;
        i = open + 1;
        if (i >= n) return;

        if (html.compare(open, 4, "<!--") == 0) {
            auto close = html.find("-->", open + 4);
            i = close == std::string::npos ? n : close + 3;
            continue;
        }
        if (html[i] == '!' || html[i] == '?') {  // doctype, processing instr.
            auto close = html.find('>', i);
            i = close == std::string::npos ? n : close + 1;
            continue;
        }
        if (html[i] == '/') {  // closing tag
            auto close = html.find('>', i);
            i = close == std::string::npos ? n : close + 1;
            continue;
        }
        if (!std::isalpha(static_cast<unsigned char>(html[i]))) continue;

        Tag tag;
        while (i < n && name_char(html[i])) tag.name += lower(html[i++]);

        // attributes
        while (i < n && html[i] != '>') {
            while (i < n && (std::isspace(static_cast<unsigned char>(html[i])) || html[i] == '/'))
                ++i;
            if (i >= n || html[i] == '>') break;
            Attr attr;
            while (i < n && html[i] != '=' && html[i] != '>' && html[i] != '/' &&
                   !std::isspace(static_cast<unsigned char>(html[i])))
                attr.name += lower(html[i++]);
            while (i < n && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
            if (i < n && html[i] == '=') {
                ++i;
                while (i < n && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
                if (i < n && (html[i] == '"' || html[i] == '\'')) {
                    char quote = html[i++];
                    attr.value_begin = i;
                    auto close = html.find(quote, i);
                    if (close == std::string::npos) {
                        attr.value_end = n;
                        attr.value = html.substr(i);
                        i = n;
                    } else {
                        attr.value_end = close;
                        attr.value = html.substr(i, close - i);
                        i = close + 1;
                    }
                } else {
                    attr.value_begin = i;
                    while (i < n && html[i] != '>' &&
                           !std::isspace(static_cast<unsigned char>(html[i])))
                        ++i;
                    attr.value_end = i;
                    attr.value = html.substr(attr.value_begin, i - attr.value_begin);
                }
            }
            if (!attr.name.empty()) tag.attrs.push_back(std::move(attr));
        }
        if (i < n) ++i;  // consume '>'

        callback(tag);

        // never scan inline script/style content
        if (tag.name == "script") {
            auto close = ifind(html, "</script", i);
            i = close == std::string::npos ? n : close;
        } else if (tag.name == "style") {
            auto close = ifind(html, "</style", i);
            i = close == std::string::npos ? n : close;
        }
    }
}

}  // namespace darc::htmlscan
