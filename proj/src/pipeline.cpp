// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/pipeline.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/scoring.hpp>
#include <ctxsearch/url.hpp>

#include <algorithm>
#include <numeric>

namespace ctxsearch {

std::vector<RankedItem> rank_corpus(const Corpus& corpus, const ScoreConfig& config) {
    const auto scores = score_corpus(corpus, config);

    std::vector<std::size_t> order(corpus.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::erase_if(order, [&](std::size_t i) { return scores[i].s_final < config.min_final_score; });
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& sa = scores[a];
        const auto& sb = scores[b];
        if (sa.s_final != sb.s_final)
            return sa.s_final > sb.s_final;
        if (sa.s_ser != sb.s_ser)
            return sa.s_ser > sb.s_ser;
        if (sa.s_cnt != sb.s_cnt)
            return sa.s_cnt > sb.s_cnt;
        return corpus.entries[a].canonical_url < corpus.entries[b].canonical_url;
    });

    std::vector<RankedItem> items;
    items.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        items.push_back({static_cast<int>(i) + 1, corpus.entries[order[i]], scores[order[i]]});
    return items;
}

std::map<std::string, double> effective_engine_weights(const ScoreConfig& config,
                                                       const std::vector<ProviderHandle>& providers) {
    auto weights = config.engine_weights;
    for (const auto& p : providers)
        weights.emplace(p.descriptor.id, p.descriptor.weight);
    return weights;
}

RankedResults run_search(const ErrorQuery& query, const ScoreConfig& config,
                         const std::vector<ProviderHandle>& providers, const SearchOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    query.validate();
    config.validate();
    if (providers.empty())
        throw Error(ErrorCode::NoProvidersAvailable, "no providers configured");

    RankedResults out;
    out.query = query;
    out.config_echo = config;
    out.config_echo.engine_weights = effective_engine_weights(config, providers);

    const auto outcomes = fetch_all(providers, query.message, options.fetch);
    std::map<std::string, std::vector<ProviderResult>> results;
    for (const auto& o : outcomes) {
        out.provider_status[o.provider_id] = o.status;
        if (o.status == ProviderStatus::ok)
            results[o.provider_id] = o.results;
    }
    if (results.empty())
        throw Error(ErrorCode::NoProvidersAvailable, "every provider failed or timed out");

    std::map<std::string, RawPage> pages;
    if (options.pages) {
        for (const auto& [id, list] : results) {
            for (const auto& r : list) {
                auto canon = try_canonicalize_url(r.url);
                if (!canon || pages.contains(*canon))
                    continue;
                if (auto page = options.pages(*canon, r.url))
                    pages.emplace(*canon, *std::move(page));
            }
        }
    }

    const auto corpus = aggregate(query, results, pages, out.config_echo.engine_weights);
    out.items = rank_corpus(corpus, out.config_echo);
    out.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return out;
}

} // namespace ctxsearch
