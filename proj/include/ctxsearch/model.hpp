// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch {

// ---------------------------------------------------------------------------
// Stack traces
// ---------------------------------------------------------------------------

struct Frame {
    std::string class_name;
    std::string method_name;
    std::optional<std::string> file;
    std::optional<int> line;
    /// `(Native Method)` frames carry neither file nor line.
    bool native_method = false;

    bool operator==(const Frame&) const = default;
};

struct TraceSegment {
    std::string exception_type;
    std::optional<std::string> message;
    std::vector<Frame> frames;

    bool operator==(const TraceSegment&) const = default;
};

/// A parsed trace. The first segment is the outermost exception, later
/// segments are its `Caused by:` chain. `raw` is the source text the
/// segments were read from.
struct StackTrace {
    std::vector<TraceSegment> segments;
    std::string raw;

    bool operator==(const StackTrace&) const = default;
};

// ---------------------------------------------------------------------------
// Query
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxCodeContextLines = 7;

/// The error being searched for.
struct ErrorQuery {
    std::string message;
    std::optional<std::string> raw_stack_trace;
    std::optional<StackTrace> parsed_trace;
    /// The affected line plus up to three lines either side.
    std::optional<std::string> code_context;

    bool operator==(const ErrorQuery&) const = default;

    /// Throws Error(InvalidQuery) when an invariant does not hold.
    void validate() const;
};

/// Builds a validated query. A trace that fails to parse is kept raw only;
/// `warnings` (when given) receives a note in that case.
ErrorQuery make_query(std::string message, std::optional<std::string> raw_trace,
                      std::optional<std::string> code_context,
                      std::vector<std::string>* warnings = nullptr);

/// Lines `line-3 .. line+3` (1-based, clipped to the source) of `source`.
std::string code_context_window(std::string_view source, int line);

std::size_t count_lines(std::string_view text);

// ---------------------------------------------------------------------------
// Result pages and corpus
// ---------------------------------------------------------------------------

struct PageContent {
    std::string body_text;
    std::vector<std::string> code_blocks;
    std::vector<StackTrace> stack_traces;
    std::set<std::string> outlinks;

    bool operator==(const PageContent&) const = default;
};

struct ResultEntry {
    std::string canonical_url;
    std::set<std::string> original_urls;
    std::string title;
    std::map<std::string, int> per_provider_positions;
    std::optional<std::int64_t> so_votes;
    std::optional<std::int64_t> traffic_rank;
    PageContent content;

    bool operator==(const ResultEntry&) const = default;
};

struct Corpus {
    ErrorQuery query;
    /// Sorted by canonical_url, pairwise distinct.
    std::vector<ResultEntry> entries;
    std::chrono::system_clock::time_point built_at{};
};

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

/// The four top-level score families that a configuration can fuse.
enum class Component { cnt, cxt, pop, ser };

std::string_view to_string(Component c);
std::optional<Component> parse_component(std::string_view name);

/// Parses "cnt,cxt,ser"; throws Error(InvalidConfig) on an unknown or empty list.
std::set<Component> parse_component_list(std::string_view list);
std::string component_list_name(const std::set<Component>& components);

struct ScoreVector {
    double s_sew = 0;
    double s_cnt = 0; ///< title match; also reported as s_title
    double s_st = 0;
    double s_cc = 0;
    double s_so = 0;
    double s_tt = 0;
    double s_pr = 0;
    double s_str = 0;
    double s_pop = 0;
    double s_cxt = 0;
    double s_ser = 0;
    double s_final = 0;

    bool operator==(const ScoreVector&) const = default;
};

std::map<std::string, double> default_engine_weights();

struct ScoreConfig {
    std::set<Component> enabled_components{Component::cnt, Component::cxt, Component::ser};
    std::map<Component, double> component_weights{
        {Component::cnt, 1.0}, {Component::cxt, 1.0}, {Component::pop, 1.0}, {Component::ser, 1.0}};
    std::map<std::string, double> engine_weights = default_engine_weights();
    double pagerank_damping = 0.85;
    double pagerank_tolerance = 1e-8;
    double min_final_score = 0.0;

    bool operator==(const ScoreConfig&) const = default;

    /// Throws Error(InvalidConfig) when an invariant does not hold.
    void validate() const;
    double weight(Component c) const;
};

} // namespace ctxsearch
