// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/service.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/serialization.hpp>
#include <ctxsearch/store.hpp>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

namespace ctxsearch {

using nlohmann::json;

namespace {

HttpReply json_reply(int status, const json& body) {
    return {status, canonical_dump(body), {}};
}

HttpReply error_reply(int status, std::string_view code, const std::string& message) {
    return json_reply(status, json{{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidQuery:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownProvider:
        return 400;
    case ErrorCode::NoProvidersAvailable:
        return 503;
    case ErrorCode::NotFound:
        return 404;
    default:
        return 500;
    }
}

std::optional<std::string> optional_string(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw Error(ErrorCode::InvalidQuery, std::string(key) + " must be a string");
    return it->get<std::string>();
}

} // namespace

SearchService::SearchService(AppConfig config, std::vector<ProviderHandle> providers, PageSource pages,
                             std::shared_ptr<const FixtureStore> fixtures)
    : config_(std::move(config)), providers_(std::move(providers)), pages_(std::move(pages)),
      fixtures_(std::move(fixtures)) {}

SearchService SearchService::from_config(AppConfig config) {
    std::shared_ptr<const FixtureStore> fixtures;
    if (config.fixture_path)
        fixtures = FixtureStore::load(*config.fixture_path);
    auto providers = build_providers(config, fixtures);
    PageSource pages;
    if (config.fetch_pages) {
        auto http = http_page_source(config.per_provider_timeout);
        pages = [fixtures, http](const std::string& canonical, const std::string& original) {
            if (fixtures)
                if (auto p = fixtures->page(canonical))
                    return p;
            return http(canonical, original);
        };
    } else if (fixtures) {
        pages = [fixtures](const std::string& canonical, const std::string&) { return fixtures->page(canonical); };
    }
    return SearchService(std::move(config), std::move(providers), std::move(pages), std::move(fixtures));
}

HttpReply SearchService::search(const std::string& request_body) const {
    json body = json::parse(request_body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
        return error_reply(400, "InvalidQuery", "request body must be a JSON object");

    try {
        auto message = optional_string(body, "error_message");
        if (!message)
            throw Error(ErrorCode::InvalidQuery, "error_message is required");
        std::vector<std::string> warnings;
        auto query = make_query(*message, optional_string(body, "stack_trace"), optional_string(body, "code_context"),
                                &warnings);
        ScoreConfig score = config_.score;
        if (auto it = body.find("score_config"); it != body.end() && !it->is_null())
            score = merge_score_config(score, *it);

        std::optional<std::string> cache_key;
        std::optional<RankedResults> results;
        if (config_.store_root && config_.cache_max_age.count() > 0) {
            cache_key = query_hash(query, score);
            results = cache_lookup(*cache_key, config_.cache_max_age, *config_.store_root);
        }
        if (!results) {
            auto options = config_.search_options();
            options.pages = pages_;
            results = run_search(query, score, providers_, options);
            results->warnings.insert(results->warnings.end(), warnings.begin(), warnings.end());
            if (cache_key) {
                try {
                    cache_store(*cache_key, *results, *config_.store_root);
                } catch (const Error& e) {
                    spdlog::warn("cache write failed: {}", e.what());
                }
            }
        }

        const auto record = make_run_record(*results);
        if (config_.store_root) {
            try {
                save_run(record, *config_.store_root);
            } catch (const Error& e) {
                spdlog::warn("run not stored: {}", e.what());
            }
        }
        json out = *results;
        out["run_id"] = record.run_id;
        auto reply = json_reply(200, out);
        reply.headers["X-Elapsed-Ms"] = std::to_string(results->elapsed.count());
        reply.headers["X-Run-Id"] = record.run_id;
        return reply;
    } catch (const Error& e) {
        return error_reply(status_for(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_reply(400, "InvalidQuery", e.what());
    } catch (const std::exception& e) {
        spdlog::error("search failed: {}", e.what());
        return error_reply(500, "Internal", e.what());
    }
}

HttpReply SearchService::health() const {
    json providers = json::object();
    for (const auto& p : providers_) {
        const auto& d = p.descriptor;
        json entry;
        if (d.kind == ProviderKind::fixture) {
            entry = {{"kind", "fixture"}, {"reachable", fixtures_ != nullptr}};
        } else {
            const char* key = d.credentials_env.empty() ? nullptr : std::getenv(d.credentials_env.c_str());
            const bool configured = key && *key;
            entry = {{"kind", "live"},
                     {"reachable", configured},
                     {"detail", configured ? "credentials configured" : "missing credentials"}};
        }
        providers[d.id] = entry;
    }
    return json_reply(200, json{{"status", "ok"}, {"providers", providers}});
}

HttpReply SearchService::config() const {
    return json_reply(200, redacted_config_json(config_));
}

HttpReply SearchService::run(const std::string& run_id) const {
    if (!config_.store_root)
        return error_reply(404, "NotFound", "this service does not store runs");
    try {
        auto record = load_run(run_id, *config_.store_root);
        return json_reply(200, json{{"run_id", record.run_id},
                                    {"created_at", format_timestamp(record.created_at)},
                                    {"results", record.results}});
    } catch (const Error& e) {
        return error_reply(status_for(e.code()), to_string(e.code()), e.what());
    }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
    std::shared_ptr<const SearchService> service;
    httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const SearchService> service) : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    auto svc = impl_->service;
    auto& srv = impl_->server;
    const std::string origin = svc->app_config().cors_origin;

    auto send = [origin](httplib::Response& res, const HttpReply& reply) {
        res.status = reply.status;
        for (const auto& [k, v] : reply.headers)
            res.set_header(k, v);
        res.set_content(reply.body, "application/json");
    };
    srv.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Expose-Headers", "X-Elapsed-Ms, X-Run-Id");
    });
    srv.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    srv.Post("/api/v1/search", [svc, send](const httplib::Request& req, httplib::Response& res) {
        auto reply = svc->search(req.body);
        spdlog::info("POST /api/v1/search -> {}", reply.status);
        send(res, reply);
    });
    srv.Get("/api/v1/health",
            [svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc->health()); });
    srv.Get("/api/v1/config",
            [svc, send](const httplib::Request&, httplib::Response& res) { send(res, svc->config()); });
    srv.Get(R"(/api/v1/runs/([0-9A-Za-z]+))", [svc, send](const httplib::Request& req, httplib::Response& res) {
        send(res, svc->run(req.matches[1]));
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0)
        return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() {
    return impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_)
        impl_->server.stop();
}

void HttpServer::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

} // namespace ctxsearch
