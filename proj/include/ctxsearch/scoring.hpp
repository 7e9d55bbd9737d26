// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctxsearch {

// Per-corpus scores are returned as vectors aligned with Corpus::entries.

/// Search-engine weight: sum of the weights of the providers that returned
/// the entry, capped at 1. Throws Error(UnknownProvider) for a provider with
/// no configured weight.
double engine_weight_score(const ResultEntry& entry, const std::map<std::string, double>& weights);

/// Cosine between the tokenized query message and result title.
double title_score(const ErrorQuery& query, const ResultEntry& entry);

/// Min-max rescaling of Hamming distances, smaller is better:
/// `1 - (d - min) / (max - min)` over the entries that have a distance, 1 for
/// all of them when max == min, 0 for entries without one.
std::vector<double> distance_scores(const std::vector<std::optional<int>>& distances);

/// Min-max rescaling of vote counts, larger is better: `(v - min) / (max - min)`,
/// 1 for all when max == min, 0 for entries without votes.
std::vector<double> vote_scores(const std::vector<std::optional<std::int64_t>>& votes);

/// Trace text fed to SimHash: canonical rendering without line numbers.
std::string trace_similarity_text(const StackTrace& trace);

/// Minimum Hamming distance between the query trace and each entry's traces.
std::vector<std::optional<int>> stacktrace_distances(const ErrorQuery& query, const Corpus& corpus);
std::vector<double> stacktrace_scores(const ErrorQuery& query, const Corpus& corpus);

/// Minimum Hamming distance between the query code context and each entry's code blocks.
std::vector<std::optional<int>> codecontext_distances(const ErrorQuery& query, const Corpus& corpus);
std::vector<double> codecontext_scores(const ErrorQuery& query, const Corpus& corpus);

std::vector<double> so_vote_scores(const Corpus& corpus);

/// `1 - (mean top-10 position - 1) / 10`; 0 when no provider placed the entry in its top 10.
double topten_score(const ResultEntry& entry);

inline constexpr int kPageRankMaxIterations = 100;

/// Power iteration over the corpus link graph (edge A→B iff B is in the corpus
/// and in A's outlinks, self links ignored) with uniform teleport and dangling
/// mass spread uniformly. Stops when the L1 change drops below `tolerance` or
/// after 100 iterations. Scores sum to 1.
std::vector<double> pagerank_raw(const Corpus& corpus, double damping, double tolerance);

/// pagerank_raw rescaled by min-max to [0,1]; all-equal scores map to 1.
std::vector<double> pagerank_scores(const Corpus& corpus, double damping, double tolerance);

/// `1 - (rank - min) / (max - min)` over entries with a traffic rank; 0 otherwise.
std::vector<double> traffic_rank_scores(const Corpus& corpus);

struct BaseScores {
    double s_sew = 0;
    double s_cnt = 0;
    double s_st = 0;
    double s_cc = 0;
    double s_so = 0;
    double s_tt = 0;
    double s_pr = 0;
    double s_str = 0;
};

/// Popularity, context and recommendation composites plus the weighted fusion
/// of the enabled components.
ScoreVector compose_scores(const BaseScores& base, const ScoreConfig& config);

/// Every base metric and composite for every entry.
std::vector<ScoreVector> score_corpus(const Corpus& corpus, const ScoreConfig& config);

/// Throws std::logic_error when a vector breaks a range or composite identity.
void check_score_invariants(const ScoreVector& v, const ScoreConfig& config);

} // namespace ctxsearch
