// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/config.hpp>
#include <ctxsearch/pipeline.hpp>
#include <ctxsearch/providers.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ctxsearch {

struct HttpReply {
    int status = 200;
    std::string body;
    std::map<std::string, std::string> headers;
};

/// Request handling behind the HTTP API, independent of the transport.
///
///     POST /api/v1/search      {error_message, stack_trace?, code_context?, score_config?}
///     GET  /api/v1/health
///     GET  /api/v1/config
///     GET  /api/v1/runs/<run_id>
///
/// All state is read-only after construction, so handlers may run concurrently.
class SearchService {
public:
    SearchService(AppConfig config, std::vector<ProviderHandle> providers, PageSource pages = {},
                  std::shared_ptr<const FixtureStore> fixtures = nullptr);

    /// Loads fixtures and builds providers as the configuration says.
    static SearchService from_config(AppConfig config);

    HttpReply search(const std::string& request_body) const;
    HttpReply health() const;
    HttpReply config() const;
    HttpReply run(const std::string& run_id) const;

    const AppConfig& app_config() const { return config_; }

private:
    AppConfig config_;
    std::vector<ProviderHandle> providers_;
    PageSource pages_;
    std::shared_ptr<const FixtureStore> fixtures_;
};

/// cpp-httplib server exposing a SearchService, with CORS headers for the
/// configured origin.
class HttpServer {
public:
    explicit HttpServer(std::shared_ptr<const SearchService> service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ctxsearch
