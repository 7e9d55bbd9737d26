// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/results.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

namespace ctxsearch {

struct RunRecord {
    std::string run_id;
    RankedResults results;
    std::chrono::system_clock::time_point created_at{};

    bool operator==(const RunRecord&) const = default;
};

/// SHA-256 (hex) of the canonical JSON of the results.
std::string compute_run_id(const RankedResults& results);

RunRecord make_run_record(RankedResults results,
                          std::chrono::system_clock::time_point now = std::chrono::system_clock::now());

/// Writes `<root>/runs/<run_id>.json` via a temporary file and rename.
/// Throws Error(IoFailure).
std::filesystem::path save_run(const RunRecord& record, const std::filesystem::path& root);

/// Throws Error(NotFound) or Error(CorruptRecord) (parse failure, invariant
/// violation or a run_id that does not match the content).
RunRecord load_run(const std::string& run_id, const std::filesystem::path& root);

/// Checks every model invariant of a results value; throws Error(CorruptRecord).
void validate_ranked_results(const RankedResults& results);

/// Parses and validates; throws Error(CorruptRecord).
RankedResults parse_ranked_results(const nlohmann::json& doc);

/// Cache key for a query under a score configuration.
std::string query_hash(const ErrorQuery& query, const ScoreConfig& config);

/// Writes `<root>/cache/<query_hash>.json`. Throws Error(IoFailure).
void cache_store(const std::string& query_hash, const RankedResults& results, const std::filesystem::path& root,
                 std::chrono::system_clock::time_point now = std::chrono::system_clock::now());

/// The cached results iff present, readable and younger than `max_age`.
std::optional<RankedResults> cache_lookup(const std::string& query_hash, std::chrono::milliseconds max_age,
                                          const std::filesystem::path& root,
                                          std::chrono::system_clock::time_point now = std::chrono::system_clock::now());

} // namespace ctxsearch
