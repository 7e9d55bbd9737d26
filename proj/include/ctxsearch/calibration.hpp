// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ctxsearch {

/// Traffic ranks of one provider's top results for one calibration query.
struct CalibrationSample {
    std::string provider_id;
    std::string query_id;
    std::vector<std::int64_t> result_ranks;
};

/// Engine weights from sampled traffic ranks.
///
/// Each general engine's weight is the inverse of the mean traffic rank over
/// all of its sampled results, normalized so the general engines sum to 1.
/// Q&A engines get a fixed weight of 1. Samples for other providers are
/// ignored. Throws Error(EmptyCalibration) when a general engine has no
/// samples, Error(InvalidConfig) on an empty or non-positive rank list.
std::map<std::string, double> calibrate_engine_weights(const std::vector<CalibrationSample>& samples,
                                                       const std::set<std::string>& general_engine_ids,
                                                       const std::set<std::string>& qa_engine_ids);

struct CalibrationInput {
    std::vector<CalibrationSample> samples;
    std::set<std::string> general;
    std::set<std::string> qa;
};

/// Accepts either a bare array of samples (Q&A set defaults to
/// {"stackoverflow"}, every other sampled provider is general) or
/// `{"samples": [...], "general": [...], "qa": [...]}`.
/// Throws Error(InvalidConfig) on schema violations or an empty sample list.
CalibrationInput parse_calibration_input(const nlohmann::json& doc);

/// One `provider  weight` line per engine, weights to two decimals.
std::string format_weight_report(const std::map<std::string, double>& weights);

} // namespace ctxsearch
