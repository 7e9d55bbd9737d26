// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/evalharness.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/serialization.hpp>
#include <ctxsearch/url.hpp>

#include <cstdio>
#include <fstream>

namespace ctxsearch {

using nlohmann::json;

GoldSet parse_gold_set(const json& doc) {
    GoldSet gold;
    std::set<std::string> ids;
    try {
        for (const auto& item : doc.at("queries")) {
            GoldQuery q;
            q.query_id = item.at("query_id").get<std::string>();
            if (!ids.insert(q.query_id).second)
                throw Error(ErrorCode::InvalidConfig, "duplicate query_id " + q.query_id);
            const auto& jq = item.at("query");
            q.query = make_query(jq.at("message").get<std::string>(),
                                 jq.contains("raw_stack_trace") && !jq["raw_stack_trace"].is_null()
                                     ? std::optional(jq["raw_stack_trace"].get<std::string>())
                                     : std::nullopt,
                                 jq.contains("code_context") && !jq["code_context"].is_null()
                                     ? std::optional(jq["code_context"].get<std::string>())
                                     : std::nullopt);
            for (const auto& url : item.at("solution_urls"))
                q.solution_urls.insert(canonicalize_url(url.get<std::string>()));
            if (q.solution_urls.empty())
                throw Error(ErrorCode::InvalidConfig, "query " + q.query_id + " has no solution URLs");
            gold.queries.push_back(std::move(q));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("gold set: ") + e.what());
    }
    return gold;
}

GoldSet load_gold_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read gold set " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
    return parse_gold_set(doc);
}

std::vector<NamedConfig> default_eval_configs(const ScoreConfig& base) {
    std::vector<NamedConfig> out;
    for (const char* name : {"cnt", "cnt,cxt", "cnt,pop", "cnt,ser", "cnt,cxt,pop", "cnt,cxt,ser", "cnt,cxt,pop,ser"}) {
        ScoreConfig c = base;
        c.enabled_components = parse_component_list(name);
        out.push_back({name, std::move(c)});
    }
    return out;
}

std::vector<NamedConfig> parse_eval_configs(const json& doc, const ScoreConfig& base) {
    if (!doc.is_array() || doc.empty())
        throw Error(ErrorCode::InvalidConfig, "eval configs must be a non-empty array");
    std::vector<NamedConfig> out;
    for (const auto& item : doc) {
        if (item.is_string()) {
            ScoreConfig c = base;
            c.enabled_components = parse_component_list(item.get<std::string>());
            out.push_back({component_list_name(c.enabled_components), std::move(c)});
        } else {
            ScoreConfig c = merge_score_config(base, item.value("score_config", json::object()));
            std::string name = item.value("name", component_list_name(c.enabled_components));
            out.push_back({std::move(name), std::move(c)});
        }
    }
    return out;
}

std::optional<int> solution_rank(const RankedResults& results, const std::set<std::string>& solutions) {
    for (const auto& item : results.items)
        if (solutions.contains(item.entry.canonical_url))
            return item.rank; // items are in rank order
    return std::nullopt;
}

EvalRow evaluate(const std::map<std::string, RankedResults>& runs, const GoldSet& gold,
                 const std::string& config_name) {
    EvalRow row;
    row.config = config_name;
    double sum10 = 0, sum20 = 0;
    for (const auto& q : gold.queries) {
        auto it = runs.find(q.query_id);
        if (it == runs.end())
            throw Error(ErrorCode::MissingRun, "no run for query " + q.query_id);
        auto rank = solution_rank(it->second, q.solution_urls);
        if (!rank)
            continue;
        if (*rank <= 10) {
            ++row.soln_10;
            sum10 += *rank;
        }
        if (*rank <= 20) {
            ++row.soln_20;
            sum20 += *rank;
        }
    }
    if (row.soln_10 > 0)
        row.r_10 = sum10 / row.soln_10;
    if (row.soln_20 > 0)
        row.r_20 = sum20 / row.soln_20;
    return row;
}

EvalReport run_matrix(const GoldSet& gold, const std::vector<NamedConfig>& configs,
                      const std::vector<ProviderHandle>& providers, const SearchOptions& options) {
    if (configs.empty())
        throw Error(ErrorCode::InvalidConfig, "no configurations to evaluate");
    EvalReport report;
    report.query_count = static_cast<int>(gold.queries.size());
    for (const auto& named : configs) {
        std::map<std::string, RankedResults> runs;
        for (const auto& q : gold.queries) {
            try {
                runs.emplace(q.query_id, run_search(q.query, named.config, providers, options));
            } catch (const Error& e) {
                throw Error(e.code(), "query " + q.query_id + ": " + e.what());
            }
        }
        report.rows.push_back(evaluate(runs, gold, named.name));
    }
    return report;
}

void to_json(json& j, const EvalRow& row) {
    j = json{{"config", row.config},
             {"soln_10", row.soln_10},
             {"r_10", row.r_10 ? json(*row.r_10) : json(nullptr)},
             {"soln_20", row.soln_20},
             {"r_20", row.r_20 ? json(*row.r_20) : json(nullptr)}};
}

void from_json(const json& j, EvalRow& row) {
    row.config = j.at("config").get<std::string>();
    row.soln_10 = j.at("soln_10").get<int>();
    row.soln_20 = j.at("soln_20").get<int>();
    row.r_10 = j.at("r_10").is_null() ? std::nullopt : std::optional(j.at("r_10").get<double>());
    row.r_20 = j.at("r_20").is_null() ? std::nullopt : std::optional(j.at("r_20").get<double>());
}

void to_json(json& j, const EvalReport& report) {
    j = json{{"query_count", report.query_count}, {"rows", report.rows}};
}

void from_json(const json& j, EvalReport& report) {
    report.query_count = j.at("query_count").get<int>();
    report.rows = j.at("rows").get<std::vector<EvalRow>>();
}

std::string render_report_table(const EvalReport& report) {
    auto rank = [](const std::optional<double>& r) {
        if (!r)
            return std::string("-");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *r);
        return std::string(buf);
    };
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %8s %8s %8s %8s\n", "Scores", "Soln_10", "R_10", "Soln_20", "R_20");
    out += line;
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof line, "%-20s %8d %8s %8d %8s\n", row.config.c_str(), row.soln_10,
                      rank(row.r_10).c_str(), row.soln_20, rank(row.r_20).c_str());
        out += line;
    }
    std::snprintf(line, sizeof line, "(%d queries)\n", report.query_count);
    out += line;
    return out;
}

} // namespace ctxsearch
