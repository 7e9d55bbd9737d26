// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>
#include <ctxsearch/providers.hpp>
#include <ctxsearch/results.hpp>

#include <vector>

namespace ctxsearch {

struct SearchOptions {
    FetchOptions fetch;
    /// Where result pages come from; unset means titles and snippets only.
    PageSource pages;
};

/// Scores, filters and sorts a corpus. Order: s_final desc, s_ser desc,
/// s_cnt desc, canonical_url asc. Entries below `min_final_score` are dropped.
std::vector<RankedItem> rank_corpus(const Corpus& corpus, const ScoreConfig& config);

/// Engine weights in effect: the configured map, plus descriptor weights for
/// providers the map does not mention.
std::map<std::string, double> effective_engine_weights(const ScoreConfig& config,
                                                       const std::vector<ProviderHandle>& providers);

/// One search: fetch from every provider concurrently, merge, extract, score,
/// filter and sort. Provider failures are recorded in `provider_status`.
///
/// Throws Error(InvalidQuery) for an invalid query and
/// Error(NoProvidersAvailable) when no provider answered.
RankedResults run_search(const ErrorQuery& query, const ScoreConfig& config,
                         const std::vector<ProviderHandle>& providers, const SearchOptions& options = {});

} // namespace ctxsearch
