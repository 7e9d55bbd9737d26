// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <ctxsearch/config.hpp>
#include <ctxsearch/error.hpp>
#include <ctxsearch/serialization.hpp>

#include "fixture_env.hpp"
#include "random_corpus.hpp"
#include "temp_dir.hpp"

#include <cstdlib>
#include <fstream>
#include <random>

using namespace ctxsearch;

namespace {

bool keys_sorted(const json& j) {
    if (j.is_object()) {
        std::string prev;
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first && k <= prev)
                return false;
            prev = k;
            first = false;
            if (!keys_sorted(v))
                return false;
        }
    } else if (j.is_array()) {
        for (const auto& v : j)
            if (!keys_sorted(v))
                return false;
    }
    return true;
}

bool object_keys_sorted_in_text(const std::string& text) {
    // Re-parse preserving insertion order and check every object.
    const auto ordered = nlohmann::ordered_json::parse(text);
    std::function<bool(const nlohmann::ordered_json&)> check = [&](const nlohmann::ordered_json& j) {
        if (j.is_object()) {
            std::string prev;
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first && k <= prev)
                    return false;
                prev = k;
                first = false;
                if (!check(v))
                    return false;
            }
        } else if (j.is_array()) {
            for (const auto& v : j)
                if (!check(v))
                    return false;
        }
        return true;
    };
    return check(ordered);
}

} // namespace

TEST_CASE("domain values round-trip through JSON", "[serialization]") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 50; ++i) {
        const Corpus c = gen::corpus(rng, 8);
        const json q = c.query;
        CHECK(q.get<ErrorQuery>() == c.query);
        for (const auto& e : c.entries) {
            const json j = e;
            CHECK(j.get<ResultEntry>() == e);
        }
    }
    const auto& env = fixture_env::env();
    const auto r = run_search(env.gold.queries.front().query, ScoreConfig{}, env.providers, env.options);
    const json j = r;
    CHECK(json::parse(canonical_dump(j)).get<RankedResults>() == r);
}

TEST_CASE("canonical dumps have sorted keys and no timing", "[serialization]") {
    const auto& env = fixture_env::env();
    auto r = run_search(env.gold.queries.at(2).query, ScoreConfig{}, env.providers, env.options);
    const std::string text = canonical_dump(json(r));
    CHECK(object_keys_sorted_in_text(text));
    CHECK(keys_sorted(json::parse(text)));
    CHECK(text.find("elapsed") == std::string::npos);
}

TEST_CASE("invalid UTF-8 does not break dumping", "[serialization]") {
    json j{{"t", std::string("caf\xe9")}};
    std::string out;
    CHECK_NOTHROW(out = canonical_dump(j));
    CHECK(json::parse(out).is_object());
}

TEST_CASE("timestamps", "[serialization]") {
    const auto t = parse_timestamp("2013-06-01T12:00:00.250Z");
    CHECK(format_timestamp(t) == "2013-06-01T12:00:00.250Z");
    CHECK_THROWS(parse_timestamp("yesterday"));
}

TEST_CASE("score config overrides merge onto a base", "[serialization]") {
    ScoreConfig base;
    auto merged = merge_score_config(base, json::parse(R"({"enabled_components":["pop","cnt"],"engine_weights":{"google":0.5}})"));
    CHECK(merged.enabled_components == std::set{Component::cnt, Component::pop});
    CHECK(merged.engine_weights.at("google") == 0.5);
    CHECK(merged.engine_weights.at("bing") == 0.30);
    CHECK(merged.pagerank_damping == 0.85);
    CHECK(merge_score_config(base, json::object()) == base);
    CHECK_THROWS_AS(merge_score_config(base, json::parse(R"({"enabled_components":[]})")), Error);
    CHECK_THROWS_AS(merge_score_config(base, json::parse(R"({"pagerank_damping":1.5})")), Error);
    CHECK_THROWS_AS(merge_score_config(base, json::parse(R"({"component_weights":{"cnt":-1}})")), Error);
}

TEST_CASE("component lists", "[serialization]") {
    CHECK(parse_component_list("ser, cnt") == std::set{Component::cnt, Component::ser});
    CHECK(component_list_name({Component::ser, Component::cnt, Component::cxt}) == "cnt,cxt,ser");
    CHECK_THROWS_AS(parse_component_list(""), Error);
    CHECK_THROWS_AS(parse_component_list("cnt,xyz"), Error);
}

TEST_CASE("application config defaults and validation", "[config]") {
    const AppConfig defaults;
    CHECK_NOTHROW(defaults.validate());
    CHECK(defaults.providers.size() == 4);
    CHECK(defaults.listen_address == "127.0.0.1:8080");

    auto invalid = [](const char* text) {
        try {
            app_config_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.code() == ErrorCode::InvalidConfig;
        }
        return false;
    };
    CHECK(invalid(R"({"providers":[]})"));
    CHECK(invalid(R"({"per_provider_timeout_ms":0})"));
    CHECK(invalid(R"({"result_limit":0})"));
    CHECK(invalid(R"({"providers":[{"id":"a","weight":0}]})"));
    CHECK(invalid(R"({"providers":[{"id":"a"},{"id":"a"}]})"));
    CHECK(invalid(R"({"providers":[{"id":"a","kind":"carrier-pigeon"}]})"));
    CHECK(invalid(R"({"listen_address":"nowhere"})"));
}

TEST_CASE("provider weights seed engine weights", "[config]") {
    auto c = app_config_from_json(json::parse(R"({"providers":[{"id":"google"},{"id":"local","weight":0.5}],
                                                  "score":{"engine_weights":{"google":0.6}}})"));
    CHECK(c.score.engine_weights == std::map<std::string, double>{{"google", 0.6}, {"local", 0.5}});
    CHECK(c.providers.at(0).weight == 0.41);
}

TEST_CASE("config files resolve paths and apply environment overrides", "[config]") {
    TempDir dir;
    std::ofstream(dir.path() / "app.json") << R"({"fixture_path":"fx.json","store_root":"var","listen_address":"0.0.0.0:9000"})";
    ::unsetenv("CTXSEARCH_LISTEN");
    auto c = load_app_config(dir.path() / "app.json");
    CHECK(c.fixture_path == dir.path() / "fx.json");
    CHECK(c.store_root == dir.path() / "var");
    CHECK(c.listen_address == "0.0.0.0:9000");
    ::setenv("CTXSEARCH_LISTEN", "127.0.0.1:7000", 1);
    CHECK(load_app_config(dir.path() / "app.json").listen_address == "127.0.0.1:7000");
    ::unsetenv("CTXSEARCH_LISTEN");
    CHECK_THROWS_AS(load_app_config(dir.path() / "missing.json"), Error);
}

TEST_CASE("the bundled default config loads", "[config]") {
    auto c = load_app_config(CTXSEARCH_DATA "/configs/default.json");
    CHECK(c.providers.size() == 4);
    REQUIRE(c.fixture_path);
    CHECK(std::filesystem::exists(*c.fixture_path));
    CHECK(c.score.engine_weights == default_engine_weights());
}

TEST_CASE("listen addresses", "[config]") {
    CHECK(parse_listen_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
    CHECK_THROWS_AS(parse_listen_address("127.0.0.1"), Error);
    CHECK_THROWS_AS(parse_listen_address("h:port"), Error);
    CHECK_THROWS_AS(parse_listen_address("h:70000"), Error);
}

TEST_CASE("the bundled live config loads", "[config]") {
    auto c = load_app_config(CTXSEARCH_DATA "/configs/live.json");
    REQUIRE(c.providers.size() == 4);
    CHECK(c.providers.at(3).id == "stackoverflow");
    CHECK(c.providers.at(3).kind == ProviderKind::live);
    CHECK(c.providers.at(3).credentials_env == "STACKEXCHANGE_KEY");
    CHECK(c.score.engine_weights == default_engine_weights());
}
