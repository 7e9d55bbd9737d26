// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/scoring.hpp>
#include <ctxsearch/stacktrace.hpp>

#include "oracles.hpp"
#include "random_corpus.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace ctxsearch;
using Catch::Matchers::WithinAbs;

namespace {

ResultEntry entry(std::string url, std::map<std::string, int> positions = {{"google", 1}}) {
    ResultEntry e;
    e.canonical_url = std::move(url);
    e.original_urls = {"https://" + e.canonical_url};
    e.per_provider_positions = std::move(positions);
    return e;
}

Corpus linked_corpus(const std::vector<std::vector<int>>& links) {
    Corpus c;
    c.query.message = "m";
    for (std::size_t i = 0; i < links.size(); ++i)
        c.entries.push_back(entry("n.example/" + std::to_string(i)));
    for (std::size_t i = 0; i < links.size(); ++i)
        for (int j : links[i])
            c.entries[i].content.outlinks.insert(c.entries[static_cast<std::size_t>(j)].canonical_url);
    return c;
}

void check_all(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK_THAT(got[i], WithinAbs(want[i], tol));
}

} // namespace

TEST_CASE("distance rescaling, smaller is better", "[scoring]") {
    check_all(distance_scores({2, 5, 10}), {1.0, 0.625, 0.0});
    check_all(distance_scores({0, 8, 16}), {1.0, 0.5, 0.0});
    check_all(distance_scores({7, 7}), {1.0, 1.0});
    check_all(distance_scores({std::nullopt, 4, std::nullopt, 12}), {0.0, 1.0, 0.0, 0.0});
    check_all(distance_scores({std::nullopt}), {0.0});
    CHECK(distance_scores({}).empty());
}

TEST_CASE("vote rescaling, larger is better", "[scoring]") {
    check_all(vote_scores({0, 10, 40}), {0.0, 0.25, 1.0});
    check_all(vote_scores({-10, 10}), {0.0, 1.0});
    check_all(vote_scores({5, std::nullopt}), {1.0, 0.0});
}

TEST_CASE("top-ten position score", "[scoring]") {
    CHECK_THAT(topten_score(entry("a.com/", {{"google", 1}, {"bing", 10}})), WithinAbs(0.55, 1e-12));
    CHECK(topten_score(entry("a.com/", {{"google", 1}})) == 1.0);
    CHECK(topten_score(entry("a.com/", {{"google", 12}})) == 0.0);
    CHECK_THAT(topten_score(entry("a.com/", {{"google", 3}, {"bing", 14}})), WithinAbs(0.8, 1e-12));
    CHECK_THAT(topten_score(entry("a.com/", {{"google", 10}})), WithinAbs(0.1, 1e-12));
}

TEST_CASE("traffic rank rescaling", "[scoring]") {
    Corpus c;
    for (std::int64_t r : {1, 500001, 1000001}) {
        c.entries.push_back(entry("t.example/" + std::to_string(r)));
        c.entries.back().traffic_rank = r;
    }
    c.entries.push_back(entry("t.example/none"));
    check_all(traffic_rank_scores(c), {1.0, 0.5, 0.0, 0.0});
}

TEST_CASE("engine weight sums contributing providers and caps at one", "[scoring]") {
    const auto w = default_engine_weights();
    CHECK(w.at("google") == 0.41);
    CHECK(w.at("bing") == 0.30);
    CHECK(w.at("yahoo") == 0.29);
    CHECK(w.at("stackoverflow") == 1.00);
    CHECK(engine_weight_score(entry("a.com/", {{"stackoverflow", 1}}), w) == 1.0);
    CHECK(engine_weight_score(entry("a.com/", {{"google", 4}}), w) == 0.41);
    CHECK_THAT(engine_weight_score(entry("a.com/", {{"google", 4}, {"bing", 2}}), w), WithinAbs(0.71, 1e-12));
    CHECK(engine_weight_score(entry("a.com/", {{"google", 1}, {"stackoverflow", 2}}), w) == 1.0);
    CHECK_THAT(engine_weight_score(entry("a.com/", {{"google", 1}, {"bing", 1}, {"yahoo", 1}}), w),
               WithinAbs(1.0, 1e-12));
    try {
        engine_weight_score(entry("a.com/", {{"altavista", 1}}), w);
        FAIL("expected UnknownProvider");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownProvider);
    }
}

TEST_CASE("title score is the token cosine with the message", "[scoring]") {
    ErrorQuery q;
    q.message = "widget disposed exception";
    auto e = entry("a.com/");
    e.title = "SWT widget is disposed";
    CHECK_THAT(title_score(q, e), WithinAbs(1.0 / std::sqrt(3.0), 1e-12));
    e.title = "";
    CHECK(title_score(q, e) == 0.0);
}

TEST_CASE("composites and weighted fusion", "[scoring]") {
    BaseScores b;
    b.s_cnt = 0.2;
    b.s_so = 0.3;
    b.s_str = 0.6;
    b.s_pr = 0.9;
    b.s_st = 0.2;
    b.s_cc = 0.8;
    b.s_sew = 1.0;
    b.s_tt = 0.55;
    ScoreConfig all;
    all.enabled_components = {Component::cnt, Component::cxt, Component::pop, Component::ser};
    auto v = compose_scores(b, all);
    CHECK_THAT(v.s_pop, WithinAbs(0.6, 1e-12));
    CHECK_THAT(v.s_cxt, WithinAbs(0.5, 1e-12));
    CHECK_THAT(v.s_ser, WithinAbs(0.55, 1e-12));
    CHECK_THAT(v.s_final, WithinAbs(1.85, 1e-12));
    CHECK_NOTHROW(check_score_invariants(v, all));

    ScoreConfig only_cnt;
    only_cnt.enabled_components = {Component::cnt};
    CHECK_THAT(compose_scores(b, only_cnt).s_final, WithinAbs(0.2, 1e-12));

    ScoreConfig weighted = all;
    weighted.component_weights[Component::pop] = 2.0;
    weighted.component_weights[Component::ser] = 0.0;
    CHECK_THAT(compose_scores(b, weighted).s_final, WithinAbs(0.2 + 0.5 + 1.2, 1e-12));
}

TEST_CASE("invariant checker rejects inconsistent vectors", "[scoring]") {
    ScoreConfig cfg;
    BaseScores b;
    b.s_cnt = 0.5;
    auto v = compose_scores(b, cfg);
    CHECK_NOTHROW(check_score_invariants(v, cfg));
    auto bad = v;
    bad.s_st = 1.5;
    CHECK_THROWS_AS(check_score_invariants(bad, cfg), std::logic_error);
    bad = v;
    bad.s_final += 0.1;
    CHECK_THROWS_AS(check_score_invariants(bad, cfg), std::logic_error);
}

TEST_CASE("pagerank on small graphs", "[scoring]") {
    SECTION("a 3-cycle is uniform") {
        auto raw = pagerank_raw(linked_corpus({{1}, {2}, {0}}), 0.85, 1e-8);
        check_all(raw, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-9);
        check_all(pagerank_scores(linked_corpus({{1}, {2}, {0}}), 0.85, 1e-8), {1.0, 1.0, 1.0});
    }
    SECTION("the linked-to page wins") {
        auto raw = pagerank_raw(linked_corpus({{1}, {}}), 0.85, 1e-8);
        CHECK(raw[1] > raw[0]);
        check_all(pagerank_scores(linked_corpus({{1}, {}}), 0.85, 1e-8), {0.0, 1.0});
    }
    SECTION("no edges gives every page the top score") {
        check_all(pagerank_scores(linked_corpus({{}, {}, {}, {}}), 0.85, 1e-8), {1.0, 1.0, 1.0, 1.0});
    }
    SECTION("self links are ignored") {
        check_all(pagerank_raw(linked_corpus({{0}, {1}}), 0.85, 1e-8), {0.5, 0.5}, 1e-12);
    }
    SECTION("empty corpus") {
        CHECK(pagerank_raw(Corpus{}, 0.85, 1e-8).empty());
    }
}

TEST_CASE("pagerank agrees with the dense oracle", "[scoring]") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        Corpus c = gen::corpus(rng, 20);
        const auto want = oracle::pagerank(oracle::corpus_links(c), 0.85, 1e-8);
        const auto got = pagerank_raw(c, 0.85, 1e-8);
        check_all(got, want, 1e-9);
        CHECK_THAT(std::accumulate(got.begin(), got.end(), 0.0), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("trace and context scores agree with an oracle", "[scoring]") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        Corpus c = gen::corpus(rng, 15);
        std::vector<std::optional<double>> st, cc;
        for (const auto& e : c.entries) {
            std::optional<double> best_t, best_c;
            if (c.query.parsed_trace) {
                const auto q = oracle::simhash(tokenize(render_stack_trace(*c.query.parsed_trace, {.line_numbers = false})));
                for (const auto& t : e.content.stack_traces) {
                    double d = oracle::hamming(q, oracle::simhash(tokenize(render_stack_trace(t, {.line_numbers = false}))));
                    best_t = best_t ? std::min(*best_t, d) : d;
                }
            }
            if (c.query.code_context) {
                const auto q = oracle::simhash(tokenize(*c.query.code_context));
                for (const auto& b : e.content.code_blocks) {
                    double d = oracle::hamming(q, oracle::simhash(tokenize(b)));
                    best_c = best_c ? std::min(*best_c, d) : d;
                }
            }
            st.push_back(best_t);
            cc.push_back(best_c);
        }
        check_all(stacktrace_scores(c.query, c), oracle::min_max_smaller_better(st));
        check_all(codecontext_scores(c.query, c), oracle::min_max_smaller_better(cc));
    }
}

TEST_CASE("trace similarity text ignores line numbers", "[scoring]") {
    auto a = parse_stack_trace("x.AException: m\n\tat p.Q.r(Q.java:10)");
    auto b = parse_stack_trace("x.AException: m\n\tat p.Q.r(Q.java:99)");
    CHECK(trace_similarity_text(a) == trace_similarity_text(b));
    CHECK(trace_similarity_text(a) == "x.AException: m\n\tat p.Q.r(Q.java)");
}

TEST_CASE("every score stays in range on random corpora", "[scoring]") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 200; ++i) {
        Corpus c = gen::corpus(rng);
        ScoreConfig cfg;
        cfg.enabled_components.clear();
        for (Component comp : {Component::cnt, Component::cxt, Component::pop, Component::ser})
            if (gen::coin(rng))
                cfg.enabled_components.insert(comp);
        if (cfg.enabled_components.empty())
            cfg.enabled_components.insert(Component::cnt);
        const auto scores = score_corpus(c, cfg);
        REQUIRE(scores.size() == c.entries.size());
        for (const auto& v : scores) {
            CHECK_NOTHROW(check_score_invariants(v, cfg));
            for (double x : {v.s_sew, v.s_cnt, v.s_st, v.s_cc, v.s_so, v.s_tt, v.s_pr, v.s_str, v.s_pop, v.s_cxt,
                             v.s_ser})
                CHECK((x >= 0.0 && x <= 1.0));
            CHECK(v.s_final >= 0.0);
            CHECK(v.s_final <= static_cast<double>(cfg.enabled_components.size()) + 1e-12);
        }
    }
}

TEST_CASE("raising one base score never lowers the final score", "[scoring]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ScoreConfig cfg;
    cfg.enabled_components = {Component::cnt, Component::cxt, Component::pop, Component::ser};
    for (int i = 0; i < 1000; ++i) {
        BaseScores b{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
        const double before = compose_scores(b, cfg).s_final;
        BaseScores raised = b;
        double* fields[] = {&raised.s_sew, &raised.s_cnt, &raised.s_st, &raised.s_cc,
                            &raised.s_so,  &raised.s_tt,  &raised.s_pr, &raised.s_str};
        double* f = fields[gen::uniform(rng, 0, 7)];
        *f = *f + (1.0 - *f) * unit(rng);
        CHECK(compose_scores(raised, cfg).s_final >= before);
    }
}

TEST_CASE("a closer trace never scores lower", "[scoring]") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::optional<int>> d;
        const int n = gen::uniform(rng, 2, 12);
        for (int k = 0; k < n; ++k)
            d.push_back(gen::coin(rng, 0.8) ? std::optional(gen::uniform(rng, 0, 64)) : std::nullopt);
        const auto k = static_cast<std::size_t>(gen::uniform(rng, 0, n - 1));
        if (!d[k])
            continue;
        auto closer = d;
        *closer[k] = gen::uniform(rng, 0, *d[k]);
        // Only the entry's own score is compared; the scale may move for others.
        CHECK(distance_scores(closer)[k] >= distance_scores(d)[k]);
    }
}
