#include "darc/canon/service.hpp"

#include "darc/canon/serde.hpp"
#include "darc/error.hpp"
#include "httplib.h"

namespace darc::canon {

using nlohmann::json;

namespace {

int status_for(Errc code) {
    switch (code) {
        case Errc::unknown_uri:
        case Errc::unknown_collision:
        case Errc::unknown_site:
            return 404;
        case Errc::out_of_order:
        case Errc::already_resolved:
        case Errc::conflict:
            return 409;
        default:
            return 400;
    }
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    send_json(res, status_for(e.code()), json{{"error", e.code_name()}, {"message", e.what()}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        send_error(res, e);
    } catch (const std::exception& e) {
        send_json(res, 400, json{{"error", "malformed"}, {"message", e.what()}});
    }
}

CanonicalUri uri_param(const httplib::Request& req) {
    if (!req.has_param("uri")) raise(Errc::unparseable, "missing uri parameter");
    return canonicalize_uri(req.get_param_value("uri"));
}

}  // namespace

struct CanonService::Routes {
    httplib::Server server;
};

CanonService::CanonService(ServiceConfig config)
    : config_(std::move(config)),
      store_(std::make_unique<CanonStore>(config_.data_dir)),
      routes_(std::make_unique<Routes>()) {}

CanonService::~CanonService() { stop(); }

std::string CanonService::base_url() const {
    return "http://" + config_.bind_host + ":" + std::to_string(port_);
}

void CanonService::start() {
    auto& server = routes_->server;

    server.Get("/api/v1/current", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto uri = uri_param(req);
            auto [site_id, current] = store_->read(
                [&](const Engine& engine) { return engine.current_uri(uri); });
            send_json(res, 200, json{{"site_id", site_id}, {"current_uri", current.render()}});
        });
    });

    server.Get("/api/v1/timeline", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto uri = uri_param(req);
            json body = store_->read([&](const Engine& engine) {
                return timeline_json(engine.site_for(uri));
            });
            send_json(res, 200, body);
        });
    });

    server.Get("/api/v1/at", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto uri = uri_param(req);
            if (!req.has_param("timestamp"))
                raise(Errc::unparseable, "missing timestamp parameter");
            auto at = Timestamp14::parse(req.get_param_value("timestamp"));
            json body = store_->read([&](const Engine& engine) {
                auto era = engine.uri_at(uri, at);
                return json{{"site_id", engine.site_for(uri).site_id},
                            {"uri_at", era.render()}};
            });
            send_json(res, 200, body);
        });
    });

    server.Post("/api/v1/observe", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto obs = observation_from_json(json::parse(req.body));
            auto outcome = store_->observe(obs);
            send_json(res, 200, to_json(outcome));
        });
    });

    server.Get("/api/v1/pending", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            json pending = json::array();
            store_->read([&](const Engine& engine) {
                for (const auto& collision : engine.list_pending())
                    pending.push_back(to_json(collision));
                return 0;
            });
            send_json(res, 200, json{{"pending", pending}});
        });
    });

    server.Post(R"(/api/v1/collisions/([A-Za-z0-9_-]+)/resolve)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] {
                        const std::string collision_id = req.matches[1];
                        json body = json::parse(req.body);
                        std::string decision = body.at("decision").get<std::string>();
                        Resolution resolution;
                        if (decision == "new_site") {
                            resolution = AsNewSite{};
                        } else if (decision == "merge_into") {
                            resolution = MergeInto{body.at("site_id").get<std::string>()};
                        } else {
                            raise(Errc::unparseable,
                                  "decision must be merge_into or new_site");
                        }
                        auto site_id = store_->resolve(collision_id, resolution);
                        send_json(res, 200, json{{"site_id", site_id}});
                    });
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
    serve_thread_ = std::thread([this] { routes_->server.listen_after_bind(); });
    server.wait_until_ready();
}

void CanonService::stop() {
    if (serve_thread_.joinable()) {
        routes_->server.stop();
        serve_thread_.join();
    }
}

}  // namespace darc::canon
