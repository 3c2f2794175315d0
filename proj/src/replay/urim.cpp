#include "darc/replay/urim.hpp"

#include "darc/error.hpp"

namespace darc::replay {

UriM UriM::parse(const std::string& text, const std::string& prefix) {
    if (text.rfind(prefix + "/", 0) != 0)
        raise(Errc::unparseable, "not under replay prefix '" + prefix + "': " + text);
    std::string rest = text.substr(prefix.size() + 1);
    auto slash = rest.find('/');
    if (slash == std::string::npos)
        raise(Errc::unparseable, "replay path needs <timestamp>/<uri>: " + text);
    UriM urim;
    urim.replay_prefix = prefix;
    urim.timestamp = Timestamp14::parse(rest.substr(0, slash));
    urim.target = canonicalize_uri(rest.substr(slash + 1));
    return urim;
}

}  // namespace darc::replay
