// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/calibration.hpp>

#include <ctxsearch/error.hpp>

#include <cstdio>

namespace ctxsearch {

std::map<std::string, double> calibrate_engine_weights(const std::vector<CalibrationSample>& samples,
                                                       const std::set<std::string>& general_engine_ids,
                                                       const std::set<std::string>& qa_engine_ids) {
    if (general_engine_ids.empty())
        throw Error(ErrorCode::EmptyCalibration, "no general engines given");

    std::map<std::string, std::pair<double, std::int64_t>> totals; // sum of ranks, count
    for (const auto& s : samples) {
        if (s.result_ranks.empty())
            throw Error(ErrorCode::InvalidConfig, "sample " + s.provider_id + "/" + s.query_id + " has no ranks");
        for (auto r : s.result_ranks)
            if (r < 1)
                throw Error(ErrorCode::InvalidConfig, "traffic ranks must be >= 1");
        if (!general_engine_ids.contains(s.provider_id))
            continue;
        auto& [sum, n] = totals[s.provider_id];
        for (auto r : s.result_ranks) {
            sum += static_cast<double>(r);
            ++n;
        }
    }

    std::map<std::string, double> inverse;
    double norm = 0;
    for (const auto& id : general_engine_ids) {
        auto it = totals.find(id);
        if (it == totals.end())
            throw Error(ErrorCode::EmptyCalibration, "no samples for " + id);
        const double mean = it->second.first / static_cast<double>(it->second.second);
        inverse[id] = 1.0 / mean;
        norm += inverse[id];
    }

    std::map<std::string, double> weights;
    for (const auto& [id, inv] : inverse)
        weights[id] = inv / norm;
    for (const auto& id : qa_engine_ids)
        weights[id] = 1.0;
    return weights;
}

CalibrationInput parse_calibration_input(const nlohmann::json& doc) {
    CalibrationInput in;
    try {
        const nlohmann::json* list = &doc;
        if (doc.is_object()) {
            list = &doc.at("samples");
            if (doc.contains("general"))
                in.general = doc.at("general").get<std::set<std::string>>();
            in.qa = doc.value("qa", std::set<std::string>{"stackoverflow"});
        } else {
            in.qa = {"stackoverflow"};
        }
        if (!list->is_array() || list->empty())
            throw Error(ErrorCode::InvalidConfig, "calibration samples must be a non-empty array");
        for (const auto& item : *list) {
            CalibrationSample s;
            s.provider_id = item.at("provider_id").get<std::string>();
            s.query_id = item.at("query_id").get<std::string>();
            s.result_ranks = item.at("result_ranks").get<std::vector<std::int64_t>>();
            if (s.result_ranks.empty())
                throw Error(ErrorCode::InvalidConfig, "result_ranks must be non-empty");
            for (auto r : s.result_ranks)
                if (r < 1)
                    throw Error(ErrorCode::InvalidConfig, "result_ranks entries must be >= 1");
            in.samples.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("calibration samples: ") + e.what());
    }
    if (in.general.empty())
        for (const auto& s : in.samples)
            if (!in.qa.contains(s.provider_id))
                in.general.insert(s.provider_id);
    return in;
}

std::string format_weight_report(const std::map<std::string, double>& weights) {
    std::string out;
    for (const auto& [id, w] : weights) {
        char line[128];
        std::snprintf(line, sizeof line, "%-16s %.2f\n", id.c_str(), w);
        out += line;
    }
    return out;
}

} // namespace ctxsearch
