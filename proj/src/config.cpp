// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/config.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/serialization.hpp>

#include <cstdlib>
#include <fstream>
#include <set>

namespace ctxsearch {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return (v && *v) ? v : nullptr;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

} // namespace

void AppConfig::validate() const {
    if (providers.empty())
        throw Error(ErrorCode::InvalidConfig, "at least one provider is required");
    std::set<std::string> ids;
    for (const auto& p : providers) {
        if (p.id.empty() || !ids.insert(p.id).second)
            throw Error(ErrorCode::InvalidConfig, "provider ids must be unique and non-empty");
        if (!(p.weight > 0.0 && p.weight <= 1.0))
            throw Error(ErrorCode::InvalidConfig, "provider weight for " + p.id + " outside (0,1]");
    }
    if (per_provider_timeout.count() <= 0)
        throw Error(ErrorCode::InvalidConfig, "per_provider_timeout must be positive");
    if (result_limit < 1)
        throw Error(ErrorCode::InvalidConfig, "result_limit must be >= 1");
    if (retries < 0)
        throw Error(ErrorCode::InvalidConfig, "retries must be >= 0");
    score.validate();
    parse_listen_address(listen_address);
}

SearchOptions AppConfig::search_options() const {
    SearchOptions o;
    o.fetch.timeout = per_provider_timeout;
    o.fetch.retries = retries;
    o.fetch.limit = result_limit;
    return o;
}

AppConfig app_config_from_json(const json& doc, const fs::path& base_dir) {
    AppConfig c;
    try {
        if (auto it = doc.find("providers"); it != doc.end()) {
            c.providers.clear();
            for (const auto& p : *it) {
                ProviderDescriptor d;
                d.id = p.at("id").get<std::string>();
                const auto defaults = default_engine_weights();
                d.weight = p.value("weight", defaults.contains(d.id) ? defaults.at(d.id) : 1.0);
                const auto kind = p.value("kind", std::string("fixture"));
                if (kind == "fixture")
                    d.kind = ProviderKind::fixture;
                else if (kind == "live")
                    d.kind = ProviderKind::live;
                else
                    throw Error(ErrorCode::InvalidConfig, "provider kind must be fixture or live");
                d.credentials_env = p.value("credentials_env", std::string{});
                c.providers.push_back(std::move(d));
            }
        }
        // provider weights seed the engine weights unless the score block overrides them
        c.score.engine_weights.clear();
        for (const auto& p : c.providers)
            c.score.engine_weights[p.id] = p.weight;
        if (auto it = doc.find("score"); it != doc.end())
            c.score = merge_score_config(c.score, *it);
        if (auto it = doc.find("fixture_path"); it != doc.end() && !it->is_null())
            c.fixture_path = resolve(base_dir, it->get<std::string>());
        c.listen_address = doc.value("listen_address", c.listen_address);
        c.per_provider_timeout = std::chrono::milliseconds(doc.value("per_provider_timeout_ms", 5000));
        c.retries = doc.value("retries", c.retries);
        c.result_limit = doc.value("result_limit", c.result_limit);
        if (auto it = doc.find("store_root"); it != doc.end() && !it->is_null())
            c.store_root = resolve(base_dir, it->get<std::string>());
        c.cache_max_age = std::chrono::seconds(doc.value("cache_max_age_s", 0));
        c.fetch_pages = doc.value("fetch_pages", false);
        c.cors_origin = doc.value("cors_origin", c.cors_origin);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    c.validate();
    return c;
}

void apply_env_overrides(AppConfig& config) {
    if (const char* v = env("CTXSEARCH_LISTEN"))
        config.listen_address = v;
    if (const char* v = env("CTXSEARCH_FIXTURES"))
        config.fixture_path = fs::path(v);
    if (const char* v = env("CTXSEARCH_STORE"))
        config.store_root = fs::path(v);
}

AppConfig load_app_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
    auto config = app_config_from_json(doc, path.parent_path());
    apply_env_overrides(config);
    config.validate();
    return config;
}

json redacted_config_json(const AppConfig& c) {
    json providers = json::array();
    for (const auto& p : c.providers) {
        json entry{{"id", p.id}, {"weight", p.weight}, {"kind", p.kind == ProviderKind::live ? "live" : "fixture"}};
        if (!p.credentials_env.empty()) {
            entry["credentials_env"] = p.credentials_env;
            entry["credentials"] = env(p.credentials_env.c_str()) ? "<redacted>" : "<unset>";
        }
        providers.push_back(std::move(entry));
    }
    return json{{"providers", providers},
                {"score", c.score},
                {"fixture_path", c.fixture_path ? json(c.fixture_path->string()) : json(nullptr)},
                {"listen_address", c.listen_address},
                {"per_provider_timeout_ms", c.per_provider_timeout.count()},
                {"retries", c.retries},
                {"result_limit", c.result_limit},
                {"store_root", c.store_root ? json(c.store_root->string()) : json(nullptr)},
                {"cache_max_age_s", c.cache_max_age.count()},
                {"fetch_pages", c.fetch_pages},
                {"cors_origin", c.cors_origin}};
}

std::vector<ProviderHandle> build_providers(const AppConfig& config, std::shared_ptr<const FixtureStore> fixtures) {
    std::vector<ProviderHandle> out;
    for (const auto& d : config.providers) {
        if (d.kind == ProviderKind::fixture) {
            if (!fixtures)
                throw Error(ErrorCode::InvalidConfig, "provider " + d.id + " needs a fixture file");
            out.push_back({d, std::make_shared<FixtureProvider>(fixtures, d.id)});
        } else if (d.id == "stackoverflow") {
            const char* key = d.credentials_env.empty() ? nullptr : env(d.credentials_env.c_str());
            out.push_back({d, std::make_shared<StackOverflowProvider>(key ? key : "", config.per_provider_timeout)});
        } else {
            throw Error(ErrorCode::InvalidConfig, "no live client for provider " + d.id);
        }
    }
    return out;
}

std::pair<std::string, int> parse_listen_address(const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0)
        throw Error(ErrorCode::InvalidConfig, "listen_address must be host:port");
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(address.substr(colon + 1), &used);
        if (used != address.size() - colon - 1)
            throw std::invalid_argument("port");
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad port in listen_address");
    }
    if (port < 0 || port > 65535)
        throw Error(ErrorCode::InvalidConfig, "port out of range");
    return {address.substr(0, colon), port};
}

} // namespace ctxsearch
