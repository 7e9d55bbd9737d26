// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>
#include <ctxsearch/pipeline.hpp>
#include <ctxsearch/providers.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ctxsearch {

/// Service and CLI configuration. File schema (all keys optional):
///
///     { "providers": [ {"id", "weight", "kind": "fixture"|"live", "credentials_env"} ],
///       "score": { ...ScoreConfig... },
///       "fixture_path": "fixtures.json",      // relative to the config file
///       "listen_address": "127.0.0.1:8080",
///       "per_provider_timeout_ms": 5000, "retries": 1, "result_limit": 15,
///       "store_root": "var", "cache_max_age_s": 0,
///       "fetch_pages": false, "cors_origin": "*" }
///
/// Environment overrides: CTXSEARCH_LISTEN, CTXSEARCH_FIXTURES, CTXSEARCH_STORE.
/// Secrets are never stored in the file, only the names of the variables
/// holding them.
struct AppConfig {
    std::vector<ProviderDescriptor> providers = default_provider_descriptors();
    ScoreConfig score;
    std::optional<std::filesystem::path> fixture_path;
    std::string listen_address = "127.0.0.1:8080";
    std::chrono::milliseconds per_provider_timeout{5000};
    int retries = 1;
    int result_limit = 15;
    std::optional<std::filesystem::path> store_root;
    std::chrono::seconds cache_max_age{0};
    bool fetch_pages = false;
    std::string cors_origin = "*";

    /// Throws Error(InvalidConfig).
    void validate() const;
    SearchOptions search_options() const;
};

AppConfig app_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads the file and applies environment overrides. Throws Error(IoFailure | InvalidConfig).
AppConfig load_app_config(const std::filesystem::path& path);

void apply_env_overrides(AppConfig& config);

/// Configuration as JSON with secret values replaced by presence flags.
nlohmann::json redacted_config_json(const AppConfig& config);

/// Provider clients for the configuration. Fixture providers need `fixtures`;
/// the only live client is `stackoverflow`.
std::vector<ProviderHandle> build_providers(const AppConfig& config, std::shared_ptr<const FixtureStore> fixtures);

/// "host:port" → (host, port). Throws Error(InvalidConfig).
std::pair<std::string, int> parse_listen_address(const std::string& address);

} // namespace ctxsearch
