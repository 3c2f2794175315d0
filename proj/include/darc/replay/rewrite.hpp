#pragma once

#include <string>

#include "darc/replay/urim.hpp"

namespace darc::replay {

/// Rewrites href/src attribute values in an HTML payload into URI-M form
/// under the same timestamp: absolute http(s) references and relative
/// references (resolved against the memento's own URI) become
/// `<prefix>/<ts>/<absolute-uri>`. Everything else — other schemes,
/// fragment-only references, script bodies, text — stays byte-identical.
/// Callers gate on content type; this transform itself is HTML-agnostic.
std::string rewrite_links(const std::string& html, const UriM& context);

}  // namespace darc::replay
