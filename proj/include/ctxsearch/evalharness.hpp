// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>
#include <ctxsearch/pipeline.hpp>
#include <ctxsearch/results.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ctxsearch {

struct GoldQuery {
    std::string query_id;
    ErrorQuery query;
    std::set<std::string> solution_urls; ///< canonical
};

struct GoldSet {
    std::vector<GoldQuery> queries;
};

/// `{"queries": [{"query_id", "query": {message, raw_stack_trace, code_context},
/// "solution_urls": [...]}]}`. Solution URLs are canonicalized on load.
/// Throws Error(InvalidConfig) on duplicate ids, empty solution sets or
/// schema errors.
GoldSet parse_gold_set(const nlohmann::json& doc);
GoldSet load_gold_set(const std::filesystem::path& path);

/// One row of the evaluation table. `r_K` is the mean solution rank over the
/// queries solved within the top K, absent when none were.
struct EvalRow {
    std::string config;
    int soln_10 = 0;
    std::optional<double> r_10;
    int soln_20 = 0;
    std::optional<double> r_20;

    bool operator==(const EvalRow&) const = default;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    int query_count = 0;

    bool operator==(const EvalReport&) const = default;
};

struct NamedConfig {
    std::string name;
    ScoreConfig config;
};

/// The seven score combinations of the original evaluation, in its row order:
/// cnt; cnt,cxt; cnt,pop; cnt,ser; cnt,cxt,pop; cnt,cxt,ser; cnt,cxt,pop,ser.
std::vector<NamedConfig> default_eval_configs(const ScoreConfig& base = {});

/// Accepts `["cnt", "cnt,cxt", ...]` or `[{"name", "score_config"}, ...]`.
std::vector<NamedConfig> parse_eval_configs(const nlohmann::json& doc, const ScoreConfig& base = {});

/// Best rank of any solution URL, if present.
std::optional<int> solution_rank(const RankedResults& results, const std::set<std::string>& solutions);

/// Throws Error(MissingRun) when a gold query has no run.
EvalRow evaluate(const std::map<std::string, RankedResults>& runs, const GoldSet& gold,
                 const std::string& config_name);

/// Runs every gold query under every configuration and tabulates the results.
/// Pipeline errors are rethrown with the query id prepended.
EvalReport run_matrix(const GoldSet& gold, const std::vector<NamedConfig>& configs,
                      const std::vector<ProviderHandle>& providers, const SearchOptions& options = {});

void to_json(nlohmann::json& j, const EvalRow& row);
void from_json(const nlohmann::json& j, EvalRow& row);
void to_json(nlohmann::json& j, const EvalReport& report);
void from_json(const nlohmann::json& j, EvalReport& report);

/// Fixed-width table, ranks to four decimals.
std::string render_report_table(const EvalReport& report);

} // namespace ctxsearch
