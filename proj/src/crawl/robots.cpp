#include "darc/crawl/robots.hpp"

#include <algorithm>
#include <cctype>

namespace darc::crawl {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

bool RobotsPolicy::pattern_matches(const std::string& pattern, const std::string& path) {
    bool anchored = !pattern.empty() && pattern.back() == '$';
    std::string pat = anchored ? pattern.substr(0, pattern.size() - 1) : pattern;

    // Split on '*' and require the pieces in order; the first piece is
    // anchored at the start of the path.
    std::size_t path_pos = 0;
    std::size_t pat_pos = 0;
    bool first = true;
    while (pat_pos < pat.size()) {
        auto star = pat.find('*', pat_pos);
        std::string piece = pat.substr(pat_pos, star == std::string::npos
                                                    ? std::string::npos
                                                    : star - pat_pos);
        if (!piece.empty()) {
            if (first) {
                if (path.compare(0, piece.size(), piece) != 0) return false;
                path_pos = piece.size();
            } else {
                auto found = path.find(piece, path_pos);
                if (found == std::string::npos) return false;
                path_pos = found + piece.size();
            }
        }
        first = false;
        if (star == std::string::npos) {
            pat_pos = pat.size();
            if (anchored) {
                // no trailing wildcard: the last piece must end the path
                return path_pos == path.size();
            }
            return true;
        }
        pat_pos = star + 1;
        if (pat_pos == pat.size()) return true;  // trailing '*' swallows the rest
    }
    // pattern was empty or all-wildcards
    return !anchored || path_pos == path.size();
}

RobotsPolicy RobotsPolicy::parse(const std::string& body, const std::string& user_agent_token) {
    struct Group {
        std::vector<std::string> agents;
        std::vector<Rule> rules;
    };
    std::vector<Group> groups;
    bool in_agent_run = false;

    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto eol = body.find('\n', pos);
        std::string line =
            body.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? body.size() + 1 : eol + 1;

        auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string field = to_lower(trim(line.substr(0, colon)));
        std::string value = trim(line.substr(colon + 1));

        if (field == "user-agent") {
            if (!in_agent_run) groups.push_back({});
            in_agent_run = true;
            groups.back().agents.push_back(to_lower(value));
        } else if (field == "allow" || field == "disallow") {
            in_agent_run = false;
            if (groups.empty()) continue;  // rules before any user-agent line
            if (value.empty()) continue;   // "Disallow:" with no path allows everything
            groups.back().rules.push_back({value, field == "allow"});
        } else {
            in_agent_run = false;  // crawl-delay, sitemap, unknown fields
        }
    }

    const std::string token = to_lower(user_agent_token);
    RobotsPolicy specific, wildcard;
    bool have_specific = false;
    for (const auto& group : groups) {
        bool matches_token = false, matches_any = false;
        for (const auto& agent : group.agents) {
            if (agent == "*") matches_any = true;
            else if (!agent.empty() && token.find(agent) != std::string::npos)
                matches_token = true;
        }
        if (matches_token) {
            have_specific = true;
            specific.rules_.insert(specific.rules_.end(), group.rules.begin(),
                                   group.rules.end());
        }
        if (matches_any)
            wildcard.rules_.insert(wildcard.rules_.end(), group.rules.begin(),
                                   group.rules.end());
    }
    return have_specific ? specific : wildcard;
}

bool RobotsPolicy::allows(const std::string& path) const {
    const Rule* best = nullptr;
    for (const auto& rule : rules_) {
        if (!pattern_matches(rule.pattern, path)) continue;
        if (!best || rule.pattern.size() > best->pattern.size() ||
            (rule.pattern.size() == best->pattern.size() && rule.allow && !best->allow))
            best = &rule;
    }
    return best == nullptr || best->allow;
}

}  // namespace darc::crawl
