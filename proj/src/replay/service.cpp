#include "darc/replay/service.hpp"

#include <mutex>
#include <regex>

#include "darc/error.hpp"
#include "darc/replay/rewrite.hpp"
#include "darc/replay/timemap.hpp"
#include "darc/replay/urim.hpp"
#include "darc/warc/io.hpp"
#include "httplib.h"
#include "json.hpp"

namespace darc::replay {

using nlohmann::json;

namespace {

std::string content_type_of(const warc::WarcRecord& record) {
    std::string head = record.http_head();
    std::size_t line_start = 0;
    while (line_start < head.size()) {
        auto eol = head.find("\r\n", line_start);
        if (eol == std::string::npos) break;
        std::string line = head.substr(line_start, eol - line_start);
        line_start = eol + 2;
        if (line.size() > 13) {
            std::string name = line.substr(0, 13);
            for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (name == "content-type:") {
                std::string value = line.substr(13);
                while (!value.empty() && value.front() == ' ') value.erase(value.begin());
                return value;
            }
        }
    }
    return "application/octet-stream";
}

bool is_html_type(const std::string& content_type) {
    std::string lower = content_type;
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower.find("text/html") != std::string::npos ||
           lower.find("application/xhtml") != std::string::npos;
}

}  // namespace

struct ReplayService::Impl {
    httplib::Server server;
    std::mutex index_mutex;
    std::shared_ptr<const warc::CdxIndex> index;

    std::shared_ptr<const warc::CdxIndex> snapshot() {
        std::lock_guard lock(index_mutex);
        return index;
    }
};

ReplayService::ReplayService(ReplayConfig config, warc::CdxIndex index,
                             canon::CanonClient* canon)
    : impl_(new Impl), config_(std::move(config)), canon_(canon) {
    impl_->index = std::make_shared<const warc::CdxIndex>(std::move(index));
}

ReplayService::~ReplayService() { stop(); }

void ReplayService::reload_index(warc::CdxIndex index) {
    std::lock_guard lock(impl_->index_mutex);
    impl_->index = std::make_shared<const warc::CdxIndex>(std::move(index));
}

std::string ReplayService::base_url() const {
    return "http://" + config_.bind_host + ":" + std::to_string(port_);
}

void ReplayService::start() {
    auto& server = impl_->server;
    const std::string prefix = config_.replay_prefix;

    // GET <prefix>/<ts14>[id_]/<absolute-uri>
    server.Get(prefix + "/.*", [this, prefix](const httplib::Request& req,
                                              httplib::Response& res) {
        static const std::regex grammar("^" + prefix + R"(/(\d{14})(id_)?/(.+)$)");
        std::smatch match;
        std::string target_path = req.target.empty() ? req.path : req.target;
        if (!std::regex_match(target_path, match, grammar)) {
            res.status = 400;
            res.set_content(json{{"error", "unparseable"},
                                 {"message", "expected " + prefix + "/<ts14>[id_]/<uri>"}}
                                .dump(),
                            "application/json");
            return;
        }
        bool identity = match[2].matched;
        Timestamp14 at;
        CanonicalUri target;
        try {
            at = Timestamp14::parse(match[1]);
            target = canonicalize_uri(match[3]);
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(json{{"error", e.code_name()}, {"message", e.what()}}.dump(),
                            "application/json");
            return;
        }

        auto index = impl_->snapshot();
        MementoResolver resolver(*index, canon_);
        auto result = resolver.resolve(target, at);
        if (!result.entry) {
            res.status = 404;
            res.set_content(
                json{{"error", "not_in_archive"}, {"tried", result.tried}}.dump(),
                "application/json");
            return;
        }

        warc::WarcRecord record;
        try {
            record = warc::read_record_at(config_.warc_dir / result.entry->warc_file,
                                          {result.entry->offset, result.entry->length});
        } catch (const Error& e) {
            res.status = 500;
            res.set_content(json{{"error", e.code_name()}, {"message", e.what()}}.dump(),
                            "application/json");
            return;
        }

        std::string body = record.payload();
        std::string content_type = content_type_of(record);
        if (!identity && is_html_type(content_type)) {
            UriM context{prefix, at, canonicalize_uri(result.entry->original_uri)};
            body = rewrite_links(body, context);
        }

        std::string host = req.get_header_value("Host");
        std::string base = host.empty() ? base_url() : "http://" + host;
        res.status = result.entry->status;
        res.set_header("Memento-Datetime", result.entry->timestamp.rfc1123());
        res.set_header("Link", "<" + result.entry->original_uri + ">; rel=\"original\", <" +
                                   base + "/timemap/link/" + target.render() +
                                   ">; rel=\"timemap\"");
        res.set_header("X-Archive-Era-Substituted", result.era_substituted ? "1" : "0");
        res.set_content(body, content_type);
    });

    server.Get("/timemap/link/.*", [this](const httplib::Request& req, httplib::Response& res) {
        std::string target_path = req.target.empty() ? req.path : req.target;
        const std::string lead = "/timemap/link/";
        CanonicalUri target;
        try {
            target = canonicalize_uri(target_path.substr(lead.size()));
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(json{{"error", e.code_name()}, {"message", e.what()}}.dump(),
                            "application/json");
            return;
        }
        auto index = impl_->snapshot();
        MementoResolver resolver(*index, canon_);
        auto entries = resolver.timemap_entries(target);
        if (entries.empty()) {
            res.status = 404;
            res.set_content(json{{"error", "not_in_archive"}}.dump(), "application/json");
            return;
        }
        std::string host = req.get_header_value("Host");
        std::string base = host.empty() ? base_url() : "http://" + host;
        res.status = 200;
        res.set_content(render_timemap(target, resolver.current_original(target), base,
                                       config_.replay_prefix, entries),
                        "application/link-format");
    });

    server.Get("/api/v1/lookup", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            if (!req.has_param("uri") || !req.has_param("timestamp"))
                raise(Errc::unparseable, "need uri and timestamp parameters");
            auto target = canonicalize_uri(req.get_param_value("uri"));
            auto at = Timestamp14::parse(req.get_param_value("timestamp"));
            auto index = impl_->snapshot();
            MementoResolver resolver(*index, canon_);
            auto result = resolver.resolve(target, at);
            res.status = result.entry ? 200 : 404;
            res.set_content(result.trace.dump(), "application/json");
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(json{{"error", e.code_name()}, {"message", e.what()}}.dump(),
                            "application/json");
        }
    });

    if (config_.port == 0) {
        port_ = server.bind_to_any_port(config_.bind_host);
        if (port_ <= 0)
            raise(Errc::bind_failure, "cannot bind " + config_.bind_host + ":ephemeral");
    } else {
        if (!server.bind_to_port(config_.bind_host, config_.port))
            raise(Errc::bind_failure,
                  "cannot bind " + config_.bind_host + ":" + std::to_string(config_.port));
        port_ = config_.port;
    }
    serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    server.wait_until_ready();
}

void ReplayService::stop() {
    if (serve_thread_.joinable()) {
        impl_->server.stop();
        serve_thread_.join();
    }
}

}  // namespace darc::replay
