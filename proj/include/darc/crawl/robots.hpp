#pragma once

#include <string>
#include <vector>

namespace darc::crawl {

/// Robots Exclusion Protocol rules for one host, reduced to the group that
/// applies to our user agent. Unparseable input degrades to allow-all.
class RobotsPolicy {
public:
    /// Never throws; a policy with no rules allows everything.
    static RobotsPolicy parse(const std::string& body, const std::string& user_agent_token);

    /// Longest-match rule wins; ties go to allow; no match allows.
    bool allows(const std::string& path) const;

    /// REP path patterns: literal prefix with `*` wildcards and an optional
    /// trailing `$` anchor.
    static bool pattern_matches(const std::string& pattern, const std::string& path);

    std::size_t rule_count() const { return rules_.size(); }

private:
    struct Rule {
        std::string pattern;
        bool allow = false;
    };
    std::vector<Rule> rules_;
};

}  // namespace darc::crawl
