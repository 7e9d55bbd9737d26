// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/serialization.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/stacktrace.hpp>

#include <cstdio>
#include <ctime>

namespace ctxsearch {
namespace {

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> read_opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    return it->template get<T>();
}

} // namespace

std::string_view to_string(ProviderStatus s) {
    switch (s) {
    case ProviderStatus::ok: return "ok";
    case ProviderStatus::timeout: return "timeout";
    case ProviderStatus::error: return "error";
    }
    return "error";
}

std::optional<ProviderStatus> parse_provider_status(std::string_view s) {
    if (s == "ok")
        return ProviderStatus::ok;
    if (s == "timeout")
        return ProviderStatus::timeout;
    if (s == "error")
        return ProviderStatus::error;
    return std::nullopt;
}

void to_json(json& j, const Frame& f) {
    j = json{{"class_name", f.class_name},
             {"method_name", f.method_name},
             {"file", opt(f.file)},
             {"line", opt(f.line)},
             {"native_method", f.native_method}};
}

void from_json(const json& j, Frame& f) {
    f.class_name = j.at("class_name").get<std::string>();
    f.method_name = j.at("method_name").get<std::string>();
    f.file = read_opt<std::string>(j, "file");
    f.line = read_opt<int>(j, "line");
    f.native_method = j.value("native_method", false);
}

void to_json(json& j, const TraceSegment& s) {
    j = json{{"exception_type", s.exception_type}, {"message", opt(s.message)}, {"frames", s.frames}};
}

void from_json(const json& j, TraceSegment& s) {
    s.exception_type = j.at("exception_type").get<std::string>();
    s.message = read_opt<std::string>(j, "message");
    s.frames = j.value("frames", std::vector<Frame>{});
}

void to_json(json& j, const StackTrace& t) {
    j = json{{"segments", t.segments}, {"raw", t.raw}};
}

void from_json(const json& j, StackTrace& t) {
    t.segments = j.at("segments").get<std::vector<TraceSegment>>();
    t.raw = j.value("raw", std::string{});
}

void to_json(json& j, const ErrorQuery& q) {
    j = json{{"message", q.message},
             {"raw_stack_trace", opt(q.raw_stack_trace)},
             {"parsed_trace", opt(q.parsed_trace)},
             {"code_context", opt(q.code_context)}};
}

void from_json(const json& j, ErrorQuery& q) {
    q.message = j.at("message").get<std::string>();
    q.raw_stack_trace = read_opt<std::string>(j, "raw_stack_trace");
    q.parsed_trace = read_opt<StackTrace>(j, "parsed_trace");
    q.code_context = read_opt<std::string>(j, "code_context");
    if (q.raw_stack_trace && !q.parsed_trace && !j.contains("parsed_trace")) {
        try {
            q.parsed_trace = parse_stack_trace(*q.raw_stack_trace);
        } catch (const Error&) {
        }
    }
}

void to_json(json& j, const PageContent& c) {
    j = json{{"body_text", c.body_text},
             {"code_blocks", c.code_blocks},
             {"stack_traces", c.stack_traces},
             {"outlinks", c.outlinks}};
}

void from_json(const json& j, PageContent& c) {
    c.body_text = j.value("body_text", std::string{});
    c.code_blocks = j.value("code_blocks", std::vector<std::string>{});
    c.stack_traces = j.value("stack_traces", std::vector<StackTrace>{});
    c.outlinks = j.value("outlinks", std::set<std::string>{});
}

void to_json(json& j, const ResultEntry& e) {
    j = json{{"canonical_url", e.canonical_url},
             {"original_urls", e.original_urls},
             {"title", e.title},
             {"per_provider_positions", e.per_provider_positions},
             {"so_votes", opt(e.so_votes)},
             {"traffic_rank", opt(e.traffic_rank)},
             {"content", e.content}};
}

void from_json(const json& j, ResultEntry& e) {
    e.canonical_url = j.at("canonical_url").get<std::string>();
    e.original_urls = j.value("original_urls", std::set<std::string>{});
    e.title = j.value("title", std::string{});
    e.per_provider_positions = j.at("per_provider_positions").get<std::map<std::string, int>>();
    e.so_votes = read_opt<std::int64_t>(j, "so_votes");
    e.traffic_rank = read_opt<std::int64_t>(j, "traffic_rank");
    e.content = j.value("content", PageContent{});
}

void to_json(json& j, const ScoreVector& v) {
    j = json{{"s_sew", v.s_sew}, {"s_cnt", v.s_cnt},     {"s_title", v.s_cnt}, {"s_st", v.s_st},
             {"s_cc", v.s_cc},   {"s_so", v.s_so},       {"s_tt", v.s_tt},     {"s_pr", v.s_pr},
             {"s_str", v.s_str}, {"s_pop", v.s_pop},     {"s_cxt", v.s_cxt},   {"s_ser", v.s_ser},
             {"s_final", v.s_final}};
}

void from_json(const json& j, ScoreVector& v) {
    v.s_sew = j.at("s_sew").get<double>();
    v.s_cnt = j.at("s_cnt").get<double>();
    v.s_st = j.at("s_st").get<double>();
    v.s_cc = j.at("s_cc").get<double>();
    v.s_so = j.at("s_so").get<double>();
    v.s_tt = j.at("s_tt").get<double>();
    v.s_pr = j.at("s_pr").get<double>();
    v.s_str = j.at("s_str").get<double>();
    v.s_pop = j.at("s_pop").get<double>();
    v.s_cxt = j.at("s_cxt").get<double>();
    v.s_ser = j.at("s_ser").get<double>();
    v.s_final = j.at("s_final").get<double>();
}

void to_json(json& j, const ScoreConfig& c) {
    json enabled = json::array();
    for (auto comp : c.enabled_components)
        enabled.push_back(std::string(to_string(comp)));
    json weights = json::object();
    for (const auto& [comp, w] : c.component_weights)
        weights[std::string(to_string(comp))] = w;
    j = json{{"enabled_components", enabled},
             {"component_weights", weights},
             {"engine_weights", c.engine_weights},
             {"pagerank_damping", c.pagerank_damping},
             {"pagerank_tolerance", c.pagerank_tolerance},
             {"min_final_score", c.min_final_score}};
}

ScoreConfig merge_score_config(ScoreConfig c, const json& j) {
    if (!j.is_object())
        throw Error(ErrorCode::InvalidConfig, "score config must be an object");
    if (auto it = j.find("enabled_components"); it != j.end()) {
        if (it->is_string()) {
            c.enabled_components = parse_component_list(it->get<std::string>());
        } else {
            std::string joined;
            for (const auto& item : *it)
                joined += item.get<std::string>() + ",";
            c.enabled_components = parse_component_list(joined);
        }
    }
    if (auto it = j.find("component_weights"); it != j.end()) {
        for (const auto& [name, w] : it->items()) {
            auto comp = parse_component(name);
            if (!comp)
                throw Error(ErrorCode::InvalidConfig, "unknown score component '" + name + "'");
            c.component_weights[*comp] = w.get<double>();
        }
    }
    if (auto it = j.find("engine_weights"); it != j.end())
        for (const auto& [id, w] : it->get<std::map<std::string, double>>())
            c.engine_weights[id] = w;
    c.pagerank_damping = j.value("pagerank_damping", c.pagerank_damping);
    c.pagerank_tolerance = j.value("pagerank_tolerance", c.pagerank_tolerance);
    c.min_final_score = j.value("min_final_score", c.min_final_score);
    c.validate();
    return c;
}

void from_json(const json& j, ScoreConfig& c) {
    c = merge_score_config(ScoreConfig{}, j);
    // A stored config is complete: its engine map replaces the defaults.
    if (auto it = j.find("engine_weights"); it != j.end()) {
        c.engine_weights = it->get<std::map<std::string, double>>();
        c.validate();
    }
}

void to_json(json& j, const RankedItem& item) {
    j = json{{"rank", item.rank}, {"entry", item.entry}, {"scores", item.scores}};
}

void from_json(const json& j, RankedItem& item) {
    item.rank = j.at("rank").get<int>();
    item.entry = j.at("entry").get<ResultEntry>();
    item.scores = j.at("scores").get<ScoreVector>();
}

void to_json(json& j, const RankedResults& r) {
    json status = json::object();
    for (const auto& [id, s] : r.provider_status)
        status[id] = std::string(to_string(s));
    j = json{{"query", r.query},
             {"config_echo", r.config_echo},
             {"items", r.items},
             {"provider_status", status},
             {"warnings", r.warnings}};
}

void from_json(const json& j, RankedResults& r) {
    r.query = j.at("query").get<ErrorQuery>();
    r.config_echo = j.at("config_echo").get<ScoreConfig>();
    r.items = j.at("items").get<std::vector<RankedItem>>();
    r.provider_status.clear();
    for (const auto& [id, s] : j.at("provider_status").items()) {
        auto status = parse_provider_status(s.get<std::string>());
        if (!status)
            throw Error(ErrorCode::InvalidConfig, "unknown provider status for " + id);
        r.provider_status[id] = *status;
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
}

std::string canonical_dump(const json& j, int indent) {
    return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
    using namespace std::chrono;
    const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
    std::time_t secs = static_cast<std::time_t>(ms / 1000);
    long frac = static_cast<long>(ms % 1000);
    if (frac < 0) {
        frac += 1000;
        --secs;
    }
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03ldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
    return buf;
}

std::chrono::system_clock::time_point parse_timestamp(const std::string& s) {
    std::tm tm{};
    int ms = 0;
    int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                        &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms);
    if (n < 6)
        throw Error(ErrorCode::CorruptRecord, "bad timestamp '" + s + "'");
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    const std::time_t secs = timegm(&tm);
    return std::chrono::system_clock::time_point{std::chrono::seconds(secs) + std::chrono::milliseconds(ms)};
}

} // namespace ctxsearch
