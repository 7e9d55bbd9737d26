// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/scoring.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/stacktrace.hpp>
#include <ctxsearch/textsim.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ctxsearch {
namespace {

// Raw PageRank values closer than this are treated as tied.
constexpr double kPageRankTieEpsilon = 1e-12;

template <typename T>
std::vector<std::optional<int>> min_distances(const Fingerprint& target, const Corpus& corpus, T&& texts_of) {
    std::vector<std::optional<int>> out(corpus.entries.size());
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        for (const auto& text : texts_of(corpus.entries[i])) {
            const int d = hamming(target, simhash(tokenize(text)));
            if (!out[i] || d < *out[i])
                out[i] = d;
        }
    }
    return out;
}

} // namespace

double engine_weight_score(const ResultEntry& entry, const std::map<std::string, double>& weights) {
    double sum = 0;
    for (const auto& [provider, position] : entry.per_provider_positions) {
        auto it = weights.find(provider);
        if (it == weights.end())
            throw Error(ErrorCode::UnknownProvider, "no engine weight for provider '" + provider + "'");
        sum += it->second;
    }
    return std::min(1.0, sum);
}

double title_score(const ErrorQuery& query, const ResultEntry& entry) {
    return cosine_similarity(tokenize(query.message), tokenize(entry.title));
}

std::vector<double> distance_scores(const std::vector<std::optional<int>>& distances) {
    std::optional<int> lo, hi;
    for (const auto& d : distances) {
        if (!d)
            continue;
        lo = lo ? std::min(*lo, *d) : *d;
        hi = hi ? std::max(*hi, *d) : *d;
    }
    std::vector<double> out(distances.size(), 0.0);
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!distances[i])
            continue;
        if (*hi == *lo)
            out[i] = 1.0;
        else
            out[i] = 1.0 - static_cast<double>(*distances[i] - *lo) / static_cast<double>(*hi - *lo);
    }
    return out;
}

std::vector<double> vote_scores(const std::vector<std::optional<std::int64_t>>& votes) {
    std::optional<std::int64_t> lo, hi;
    for (const auto& v : votes) {
        if (!v)
            continue;
        lo = lo ? std::min(*lo, *v) : *v;
        hi = hi ? std::max(*hi, *v) : *v;
    }
    std::vector<double> out(votes.size(), 0.0);
    for (std::size_t i = 0; i < votes.size(); ++i) {
        if (!votes[i])
            continue;
        if (*hi == *lo)
            out[i] = 1.0;
        else
            out[i] = static_cast<double>(*votes[i] - *lo) / static_cast<double>(*hi - *lo);
    }
    return out;
}

std::string trace_similarity_text(const StackTrace& trace) {
    return render_stack_trace(trace, RenderOptions{.line_numbers = false});
}

std::vector<std::optional<int>> stacktrace_distances(const ErrorQuery& query, const Corpus& corpus) {
    if (!query.parsed_trace)
        return std::vector<std::optional<int>>(corpus.entries.size());
    const auto target = simhash(tokenize(trace_similarity_text(*query.parsed_trace)));
    return min_distances(target, corpus, [](const ResultEntry& e) {
        std::vector<std::string> texts;
        for (const auto& t : e.content.stack_traces)
            texts.push_back(trace_similarity_text(t));
        return texts;
    });
}

std::vector<double> stacktrace_scores(const ErrorQuery& query, const Corpus& corpus) {
    return distance_scores(stacktrace_distances(query, corpus));
}

std::vector<std::optional<int>> codecontext_distances(const ErrorQuery& query, const Corpus& corpus) {
    if (!query.code_context)
        return std::vector<std::optional<int>>(corpus.entries.size());
    const auto target = simhash(tokenize(*query.code_context));
    return min_distances(target, corpus, [](const ResultEntry& e) { return e.content.code_blocks; });
}

std::vector<double> codecontext_scores(const ErrorQuery& query, const Corpus& corpus) {
    return distance_scores(codecontext_distances(query, corpus));
}

std::vector<double> so_vote_scores(const Corpus& corpus) {
    std::vector<std::optional<std::int64_t>> votes;
    votes.reserve(corpus.entries.size());
    for (const auto& e : corpus.entries)
        votes.push_back(e.so_votes);
    return vote_scores(votes);
}

double topten_score(const ResultEntry& entry) {
    double sum = 0;
    int n = 0;
    for (const auto& [provider, position] : entry.per_provider_positions) {
        if (position >= 1 && position <= 10) {
            sum += position;
            ++n;
        }
    }
    if (n == 0)
        return 0.0;
    const double mean = sum / n;
    return 1.0 - (mean - 1.0) / 10.0;
}

std::vector<double> pagerank_raw(const Corpus& corpus, double damping, double tolerance) {
    const std::size_t n = corpus.entries.size();
    if (n == 0)
        return {};
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
        index.emplace(corpus.entries[i].canonical_url, i);

    std::vector<std::vector<std::size_t>> outgoing(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& link : corpus.entries[i].content.outlinks)
            if (auto it = index.find(link); it != index.end() && it->second != i)
                outgoing[i].push_back(it->second);

    const double dn = static_cast<double>(n);
    std::vector<double> rank(n, 1.0 / dn);
    std::vector<double> next(n);
    for (int iter = 0; iter < kPageRankMaxIterations; ++iter) {
        double dangling = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (outgoing[i].empty())
                dangling += rank[i];
        std::fill(next.begin(), next.end(), (1.0 - damping) / dn + damping * dangling / dn);
        for (std::size_t i = 0; i < n; ++i) {
            if (outgoing[i].empty())
                continue;
            const double share = damping * rank[i] / static_cast<double>(outgoing[i].size());
            for (auto j : outgoing[i])
                next[j] += share;
        }
        double change = 0;
        for (std::size_t i = 0; i < n; ++i)
            change += std::abs(next[i] - rank[i]);
        rank.swap(next);
        if (change < tolerance)
            break;
    }
    return rank;
}

std::vector<double> pagerank_scores(const Corpus& corpus, double damping, double tolerance) {
    auto raw = pagerank_raw(corpus, damping, tolerance);
    if (raw.empty())
        return raw;
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(raw.size(), 1.0);
    if (hi - lo <= kPageRankTieEpsilon * hi)
        return out;
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = (raw[i] - lo) / (hi - lo);
    return out;
}

std::vector<double> traffic_rank_scores(const Corpus& corpus) {
    std::optional<std::int64_t> lo, hi;
    for (const auto& e : corpus.entries) {
        if (!e.traffic_rank)
            continue;
        lo = lo ? std::min(*lo, *e.traffic_rank) : *e.traffic_rank;
        hi = hi ? std::max(*hi, *e.traffic_rank) : *e.traffic_rank;
    }
    std::vector<double> out(corpus.entries.size(), 0.0);
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        const auto& r = corpus.entries[i].traffic_rank;
        if (!r)
            continue;
        out[i] = *hi == *lo ? 1.0 : 1.0 - static_cast<double>(*r - *lo) / static_cast<double>(*hi - *lo);
    }
    return out;
}

ScoreVector compose_scores(const BaseScores& base, const ScoreConfig& config) {
    ScoreVector v;
    v.s_sew = base.s_sew;
    v.s_cnt = base.s_cnt;
    v.s_st = base.s_st;
    v.s_cc = base.s_cc;
    v.s_so = base.s_so;
    v.s_tt = base.s_tt;
    v.s_pr = base.s_pr;
    v.s_str = base.s_str;
    v.s_pop = (base.s_so + base.s_str + base.s_pr) / 3.0;
    v.s_cxt = (base.s_st + base.s_cc) / 2.0;
    v.s_ser = base.s_sew * base.s_tt;

    double total = 0;
    for (auto c : config.enabled_components) {
        double s = 0;
        switch (c) {
        case Component::cnt: s = v.s_cnt; break;
        case Component::cxt: s = v.s_cxt; break;
        case Component::pop: s = v.s_pop; break;
        case Component::ser: s = v.s_ser; break;
        }
        total += config.weight(c) * s;
    }
    v.s_final = total;
    return v;
}

std::vector<ScoreVector> score_corpus(const Corpus& corpus, const ScoreConfig& config) {
    const auto& q = corpus.query;
    const auto st = stacktrace_scores(q, corpus);
    const auto cc = codecontext_scores(q, corpus);
    const auto so = so_vote_scores(corpus);
    const auto pr = pagerank_scores(corpus, config.pagerank_damping, config.pagerank_tolerance);
    const auto str = traffic_rank_scores(corpus);

    std::vector<ScoreVector> out;
    out.reserve(corpus.entries.size());
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        const auto& e = corpus.entries[i];
        BaseScores b;
        b.s_sew = engine_weight_score(e, config.engine_weights);
        b.s_cnt = title_score(q, e);
        b.s_st = st[i];
        b.s_cc = cc[i];
        b.s_so = so[i];
        b.s_tt = topten_score(e);
        b.s_pr = pr[i];
        b.s_str = str[i];
        out.push_back(compose_scores(b, config));
        check_score_invariants(out.back(), config);
    }
    return out;
}

void check_score_invariants(const ScoreVector& v, const ScoreConfig& config) {
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    for (double x : {v.s_sew, v.s_cnt, v.s_st, v.s_cc, v.s_so, v.s_tt, v.s_pr, v.s_str, v.s_pop, v.s_cxt, v.s_ser})
        if (!in_unit(x))
            throw std::logic_error("score component outside [0,1]");
    double cap = 0;
    for (auto c : config.enabled_components)
        cap += config.weight(c);
    if (!(v.s_final >= 0.0 && v.s_final <= cap + 1e-12))
        throw std::logic_error("final score outside [0, sum of weights]");
    constexpr double eps = 1e-12;
    if (std::abs(v.s_pop - (v.s_so + v.s_str + v.s_pr) / 3.0) > eps ||
        std::abs(v.s_cxt - (v.s_st + v.s_cc) / 2.0) > eps || std::abs(v.s_ser - v.s_sew * v.s_tt) > eps)
        throw std::logic_error("composite score identity violated");
    double fused = 0;
    for (auto c : config.enabled_components) {
        const double x = c == Component::cnt   ? v.s_cnt
                         : c == Component::cxt ? v.s_cxt
                         : c == Component::pop ? v.s_pop
                                               : v.s_ser;
        fused += config.weight(c) * x;
    }
    if (std::abs(v.s_final - fused) > 1e-9)
        throw std::logic_error("final score is not the weighted sum of the enabled components");
}

} // namespace ctxsearch
