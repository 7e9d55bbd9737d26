// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch {

enum class ProviderStatus { ok, timeout, error };

std::string_view to_string(ProviderStatus s);
std::optional<ProviderStatus> parse_provider_status(std::string_view s);

struct RankedItem {
    int rank = 0;
    ResultEntry entry;
    ScoreVector scores;

    bool operator==(const RankedItem&) const = default;
};

/// Output of one search. `elapsed` is timing metadata and is not part of the
/// canonical JSON form (which must be byte-stable across runs).
struct RankedResults {
    ErrorQuery query;
    ScoreConfig config_echo;
    std::vector<RankedItem> items;
    std::map<std::string, ProviderStatus> provider_status;
    std::vector<std::string> warnings;
    std::chrono::milliseconds elapsed{0};

    /// Equality over the canonical content (ignores `elapsed`).
    bool operator==(const RankedResults& other) const {
        return query == other.query && config_echo == other.config_echo && items == other.items &&
               provider_status == other.provider_status && warnings == other.warnings;
    }
};

} // namespace ctxsearch
