// SPDX-License-Identifier: Apache-2.0
//
// ctxsearch: command-line front end.
//
//   ctxsearch search    --message TEXT [--trace FILE] [--context FILE [--line N]] [--scores LIST]
//                       [--top N] [--fixtures PATH] [--config FILE] [--format json|table]
//   ctxsearch calibrate --samples FILE [--format json|table]
//   ctxsearch eval      --gold FILE --fixtures PATH [--configs default|FILE] [--format json|table]
//   ctxsearch serve     [--config FILE] [--fixtures PATH] [--listen HOST:PORT]
//
// Exit status: 0 success, 1 runtime error, 2 usage error.

#include <ctxsearch/calibration.hpp>
#include <ctxsearch/config.hpp>
#include <ctxsearch/error.hpp>
#include <ctxsearch/evalharness.hpp>
#include <ctxsearch/pipeline.hpp>
#include <ctxsearch/serialization.hpp>
#include <ctxsearch/service.hpp>
#include <ctxsearch/store.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ctxsearch;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("file not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    json doc = json::parse(read_text(path), nullptr, false);
    if (doc.is_discarded())
        throw UsageError(path + " is not valid JSON");
    return doc;
}

AppConfig base_config(const std::string& config_path, const std::string& fixtures) {
    AppConfig config = config_path.empty() ? AppConfig{} : load_app_config(config_path);
    if (config_path.empty())
        apply_env_overrides(config);
    if (!fixtures.empty())
        config.fixture_path = fixtures;
    if (config.fixture_path && !std::filesystem::exists(*config.fixture_path))
        throw UsageError("file not found: " + config.fixture_path->string());
    return config;
}

std::string fmt_score(double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void print_table(const RankedResults& results, std::size_t top) {
    std::printf("%4s  %-6s %-6s %-6s %-6s %-6s  %s\n", "rank", "final", "cnt", "cxt", "pop", "ser", "result");
    for (const auto& item : results.items) {
        if (static_cast<std::size_t>(item.rank) > top)
            break;
        const auto& s = item.scores;
        std::printf("%4d  %-6s %-6s %-6s %-6s %-6s  %s\n", item.rank, fmt_score(s.s_final).c_str(),
                    fmt_score(s.s_cnt).c_str(), fmt_score(s.s_cxt).c_str(), fmt_score(s.s_pop).c_str(),
                    fmt_score(s.s_ser).c_str(), item.entry.canonical_url.c_str());
        if (!item.entry.title.empty())
            std::printf("%4s  %s\n", "", item.entry.title.c_str());
    }
    for (const auto& [id, status] : results.provider_status)
        if (status != ProviderStatus::ok)
            std::fprintf(stderr, "provider %s: %s\n", id.c_str(), std::string(to_string(status)).c_str());
    for (const auto& w : results.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::fprintf(stderr, "%zu results in %lld ms\n", results.items.size(),
                 static_cast<long long>(results.elapsed.count()));
}

struct SearchFlags {
    std::string message;
    std::string trace_file;
    std::string context_file;
    int line = 0;
    std::string scores = "cnt,cxt,ser";
    std::size_t top = 10;
    std::string fixtures;
    std::string config;
    std::string format = "table";
    bool save = false;
};

int cmd_search(const SearchFlags& f) {
    std::optional<std::string> trace, context;
    if (!f.trace_file.empty())
        trace = read_text(f.trace_file);
    if (!f.context_file.empty()) {
        std::string source = read_text(f.context_file);
        context = f.line > 0 ? code_context_window(source, f.line) : source;
    }
    AppConfig config = base_config(f.config, f.fixtures);
    ScoreConfig score = config.score;
    try {
        score.enabled_components = parse_component_list(f.scores);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    std::vector<std::string> warnings;
    auto query = make_query(f.message, trace, context, &warnings);

    std::shared_ptr<const FixtureStore> fixtures;
    if (config.fixture_path)
        fixtures = FixtureStore::load(*config.fixture_path);
    auto providers = build_providers(config, fixtures);
    auto options = config.search_options();
    if (fixtures)
        options.pages = fixtures->page_source();

    auto results = run_search(query, score, providers, options);
    results.warnings.insert(results.warnings.end(), warnings.begin(), warnings.end());
    if (f.save && !config.store_root)
        throw UsageError("--save needs a store_root in the configuration or CTXSEARCH_STORE");
    if (f.save) {
        auto path = save_run(make_run_record(results), *config.store_root);
        std::fprintf(stderr, "saved %s\n", path.string().c_str());
    }
    if (results.items.size() > f.top)
        results.items.resize(f.top);

    if (f.format == "json")
        std::cout << canonical_dump(json(results), 2) << "\n";
    else
        print_table(results, f.top);
    return kOk;
}

int cmd_calibrate(const std::string& samples_path, const std::string& format) {
    CalibrationInput input;
    try {
        input = parse_calibration_input(read_json(samples_path));
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    auto weights = calibrate_engine_weights(input.samples, input.general, input.qa);
    if (format == "json") {
        std::cout << canonical_dump(json(weights), 2) << "\n";
    } else {
        std::cout << format_weight_report(weights);
    }
    return kOk;
}

int cmd_eval(const std::string& gold_path, const std::string& fixtures, const std::string& configs,
             const std::string& config_path, const std::string& format) {
    AppConfig config = base_config(config_path, fixtures);
    if (!config.fixture_path)
        throw UsageError("--fixtures is required");
    auto gold = load_gold_set(gold_path);
    auto named = configs == "default" ? default_eval_configs(config.score)
                                      : parse_eval_configs(read_json(configs), config.score);
    auto store = FixtureStore::load(*config.fixture_path);
    auto providers = build_providers(config, store);
    auto options = config.search_options();
    options.pages = store->page_source();

    auto report = run_matrix(gold, named, providers, options);
    if (format == "json")
        std::cout << canonical_dump(json(report), 2) << "\n";
    else
        std::cout << render_report_table(report);
    return kOk;
}

HttpServer* g_server = nullptr;

int cmd_serve(const std::string& config_path, const std::string& fixtures, const std::string& listen) {
    AppConfig config = base_config(config_path, fixtures);
    if (!listen.empty())
        config.listen_address = listen;
    config.validate();
    auto [host, port] = parse_listen_address(config.listen_address);

    auto service = std::make_shared<const SearchService>(SearchService::from_config(config));
    HttpServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::fprintf(stderr, "cannot bind %s\n", config.listen_address.c_str());
        return kRuntimeError;
    }
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server)
            g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server)
            g_server->stop();
    });
    std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), bound);
    const bool ok = server.listen();
    g_server = nullptr;
    return ok ? kOk : kRuntimeError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Context-aware meta-search for programming errors"};
    app.require_subcommand(1);

    SearchFlags sf;
    auto* search = app.add_subcommand("search", "Rank results for one error");
    search->add_option("--message", sf.message, "Error or exception message")->required();
    search->add_option("--trace", sf.trace_file, "File holding the stack trace");
    search->add_option("--context", sf.context_file, "File holding the code context (or the whole source with --line)");
    search->add_option("--line", sf.line, "Affected line in --context; keeps three lines either side");
    search->add_option("--scores", sf.scores, "Score components to fuse")->capture_default_str();
    search->add_option("--top", sf.top, "Number of results to print")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    search->add_option("--fixtures", sf.fixtures, "Fixture file for fixture providers");
    search->add_option("--config", sf.config, "Configuration file");
    search->add_option("--format", sf.format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    search->add_flag("--save", sf.save, "Store the run under the configured store_root");

    std::string samples, cal_format = "table";
    auto* calibrate = app.add_subcommand("calibrate", "Derive engine weights from traffic-rank samples");
    calibrate->add_option("--samples", samples, "Calibration sample file")->required();
    calibrate->add_option("--format", cal_format, "Output format")->check(CLI::IsMember({"json", "table"}));

    std::string gold, eval_fixtures, eval_configs = "default", eval_config, eval_format = "table";
    auto* eval = app.add_subcommand("eval", "Evaluate score combinations against a gold set");
    eval->add_option("--gold", gold, "Gold set file")->required();
    eval->add_option("--fixtures", eval_fixtures, "Fixture file");
    eval->add_option("--configs", eval_configs, "'default' or a JSON file of configurations")->capture_default_str();
    eval->add_option("--config", eval_config, "Configuration file");
    eval->add_option("--format", eval_format, "Output format")->check(CLI::IsMember({"json", "table"}));

    std::string serve_config, serve_fixtures, listen;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--config", serve_config, "Configuration file");
    serve->add_option("--fixtures", serve_fixtures, "Fixture file");
    serve->add_option("--listen", listen, "host:port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*search)
            return cmd_search(sf);
        if (*calibrate)
            return cmd_calibrate(samples, cal_format);
        if (*eval)
            return cmd_eval(gold, eval_fixtures, eval_configs, eval_config, eval_format);
        if (*serve)
            return cmd_serve(serve_config, serve_fixtures, listen);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ErrorCode::InvalidQuery || e.code() == ErrorCode::InvalidConfig ? kUsageError
                                                                                           : kRuntimeError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeError;
    }
    return kUsageError;
}
