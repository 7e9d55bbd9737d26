// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <ctxsearch/calibration.hpp>
#include <ctxsearch/config.hpp>
#include <ctxsearch/error.hpp>
#include <ctxsearch/evalharness.hpp>
#include <ctxsearch/pipeline.hpp>
#include <ctxsearch/scoring.hpp>
#include <ctxsearch/serialization.hpp>
#include <ctxsearch/service.hpp>
#include <ctxsearch/stacktrace.hpp>
#include <ctxsearch/textsim.hpp>

#include "fixture_env.hpp"
#include "oracles.hpp"
#include "random_corpus.hpp"
#include "response_schema.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

using namespace ctxsearch;
using nlohmann::json;

namespace {

/// Collects failed expectations; a criterion passes when none were recorded.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok && failures_.size() < 5)
            failures_.push_back(what);
        if (!ok)
            ++failed_;
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream ss;
        ss.precision(17);
        ss << what << ": got " << got << ", want " << want;
        expect(std::fabs(got - want) <= tol, ss.str());
    }
    bool ok() const { return failed_ == 0; }
    int count() const { return count_; }
    std::string summary() const {
        std::string out = std::to_string(failed_) + " of " + std::to_string(count_) + " checks failed";
        for (const auto& f : failures_)
            out += "\n      - " + f;
        return out;
    }

private:
    int count_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
};

struct Criterion {
    std::string name;
    double budget_s;
    std::function<void(Check&)> body;
};

ResultEntry entry(std::string url, std::map<std::string, int> positions) {
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
        c.entries.push_back(entry("n.example/" + std::to_string(i), {{"google", 1}}));
    for (std::size_t i = 0; i < links.size(); ++i)
        for (int j : links[i])
            c.entries[i].content.outlinks.insert(c.entries[static_cast<std::size_t>(j)].canonical_url);
    return c;
}

void all_near(Check& c, const std::vector<double>& got, const std::vector<double>& want, double tol,
              const std::string& what) {
    c.expect(got.size() == want.size(), what + ": size");
    for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i)
        c.near(got[i], want[i], tol, what + "[" + std::to_string(i) + "]");
}

// ---------------------------------------------------------------------------

void scoring_formulas(Check& c) {
    all_near(c, distance_scores({2, 5, 10}), {1.0, 0.625, 0.0}, 1e-12, "distance {2,5,10}");
    all_near(c, distance_scores({0, 8, 16}), {1.0, 0.5, 0.0}, 1e-12, "distance {0,8,16}");
    all_near(c, distance_scores({4, 4}), {1.0, 1.0}, 0, "distance tie");
    all_near(c, distance_scores({std::nullopt, 3}), {0.0, 1.0}, 0, "distance absent");
    all_near(c, vote_scores({0, 10, 40}), {0.0, 0.25, 1.0}, 1e-12, "votes {0,10,40}");
    c.near(topten_score(entry("a.com/", {{"google", 1}, {"bing", 10}})), 0.55, 1e-12, "top-ten {1,10}");
    c.near(topten_score(entry("a.com/", {{"google", 12}})), 0.0, 0, "top-ten {12}");

    Corpus traffic;
    for (std::int64_t r : {1, 500001, 1000001}) {
        traffic.entries.push_back(entry("t.example/" + std::to_string(r), {{"google", 1}}));
        traffic.entries.back().traffic_rank = r;
    }
    all_near(c, traffic_rank_scores(traffic), {1.0, 0.5, 0.0}, 1e-12, "traffic");

    const auto w = default_engine_weights();
    c.near(engine_weight_score(entry("a.com/", {{"stackoverflow", 1}}), w), 1.0, 0, "engine weight so");
    c.near(engine_weight_score(entry("a.com/", {{"google", 1}}), w), 0.41, 0, "engine weight google");
    c.near(engine_weight_score(entry("a.com/", {{"google", 1}, {"stackoverflow", 3}}), w), 1.0, 0,
           "engine weight capped");
    bool unknown = false;
    try {
        engine_weight_score(entry("a.com/", {{"nobody", 1}}), w);
    } catch (const Error& e) {
        unknown = e.code() == ErrorCode::UnknownProvider;
    }
    c.expect(unknown, "unknown provider raises UnknownProvider");

    ErrorQuery q;
    q.message = "widget disposed exception";
    auto titled = entry("a.com/", {{"google", 1}});
    titled.title = "SWT widget is disposed";
    c.near(title_score(q, titled), 1.0 / std::sqrt(3.0), 1e-12, "title cosine");

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
    const auto v = compose_scores(b, all);
    c.near(v.s_pop, 0.6, 1e-12, "popularity composite");
    c.near(v.s_cxt, 0.5, 1e-12, "context composite");
    c.near(v.s_ser, 0.55, 1e-12, "recommendation composite");
    c.near(v.s_final, 1.85, 1e-12, "fused score");
}

void simhash_oracle(Check& c) {
    c.expect(hash64("") == 0x9a5f18b083ca7e6fULL, "hash64 known answer (empty)");
    c.expect(hash64("foo") == 0x114a0647f4df03a7ULL, "hash64 known answer (foo)");
    c.expect(hamming({~0ULL}, {0}) == 64, "hamming all bits");
    c.expect(hamming({0b1011}, {0b0010}) == 2, "hamming example");
    std::mt19937_64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        TokenBag bag;
        const int n = gen::uniform(rng, 0, 40);
        for (int k = 0; k < n; ++k)
            bag[gen::word(rng) + std::to_string(gen::uniform(rng, 0, 99))] += gen::uniform(rng, 1, 6);
        c.expect(simhash(bag).bits == oracle::simhash(bag), "simhash bag " + std::to_string(i));
    }
    for (int i = 0; i < 10000; ++i) {
        const Fingerprint a{rng()}, b{rng()};
        const int d = hamming(a, b);
        c.expect(d == oracle::hamming(a.bits, b.bits), "hamming pair " + std::to_string(i));
        c.expect(d == hamming(b, a) && d >= 0 && d <= 64, "hamming symmetric and bounded");
    }
}

void pagerank_oracle(Check& c) {
    all_near(c, pagerank_raw(linked_corpus({{1}, {2}, {0}}), 0.85, 1e-8), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-6,
             "3-cycle");
    const auto two = pagerank_raw(linked_corpus({{1}, {}}), 0.85, 1e-8);
    c.expect(two.size() == 2 && two[1] > two[0], "linked-to page ranks higher");
    all_near(c, pagerank_scores(linked_corpus({{}, {}, {}}), 0.85, 1e-8), {1.0, 1.0, 1.0}, 0, "no edges");

    std::mt19937_64 rng(103);
    for (int i = 0; i < 100; ++i) {
        const Corpus corpus = gen::corpus(rng, 20);
        const auto got = pagerank_raw(corpus, 0.85, 1e-8);
        const auto want = oracle::pagerank(oracle::corpus_links(corpus), 0.85, 1e-8);
        all_near(c, got, want, 1e-6, "corpus " + std::to_string(i));
        c.near(std::accumulate(got.begin(), got.end(), 0.0), 1.0, 1e-6, "sum corpus " + std::to_string(i));
        for (double s : pagerank_scores(corpus, 0.85, 1e-8))
            c.expect(s >= 0.0 && s <= 1.0, "normalized pagerank in [0,1]");
    }
}

void score_invariants(Check& c) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 500; ++i) {
        const Corpus corpus = gen::corpus(rng);
        ScoreConfig cfg;
        cfg.enabled_components = {Component::cnt};
        for (Component comp : {Component::cxt, Component::pop, Component::ser})
            if (gen::coin(rng))
                cfg.enabled_components.insert(comp);
        try {
            const auto scores = score_corpus(corpus, cfg);
            for (const auto& v : scores)
                check_score_invariants(v, cfg);
            const auto ranked = rank_corpus(corpus, cfg);
            c.expect(ranked.size() == corpus.entries.size(), "ranking keeps every entry");
            for (std::size_t k = 1; k < ranked.size(); ++k)
                c.expect(ranked[k - 1].scores.s_final >= ranked[k].scores.s_final, "ranking is sorted");
        } catch (const std::exception& e) {
            c.expect(false, "corpus " + std::to_string(i) + ": " + e.what());
        }
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ScoreConfig all;
    all.enabled_components = {Component::cnt, Component::cxt, Component::pop, Component::ser};
    for (int i = 0; i < 1000; ++i) {
        BaseScores b{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
        const double before = compose_scores(b, all).s_final;
        double* fields[] = {&b.s_sew, &b.s_cnt, &b.s_st, &b.s_cc, &b.s_so, &b.s_tt, &b.s_pr, &b.s_str};
        double* f = fields[gen::uniform(rng, 0, 7)];
        *f += (1.0 - *f) * unit(rng);
        c.expect(compose_scores(b, all).s_final >= before, "raising a base score lowered the final score");
    }
}

void calibration(Check& c) {
    const std::set<std::string> general{"bing", "google", "yahoo"};
    const std::set<std::string> qa{"stackoverflow"};
    auto w = calibrate_engine_weights({{"google", "q", {50}}, {"bing", "q", {50}}, {"yahoo", "q", {50}}}, general, qa);
    for (const auto& id : general)
        c.near(w.at(id), 1.0 / 3, 1e-12, "symmetric " + id);
    c.near(w.at("stackoverflow"), 1.0, 0, "Q&A weight");
    w = calibrate_engine_weights({{"google", "q", {100}}, {"bing", "q", {200}}, {"yahoo", "q", {400}}}, general, qa);
    c.near(w.at("google"), 4.0 / 7, 1e-12, "google 4/7");
    c.near(w.at("bing"), 2.0 / 7, 1e-12, "bing 2/7");
    c.near(w.at("yahoo"), 1.0 / 7, 1e-12, "yahoo 1/7");

    bool empty = false;
    try {
        calibrate_engine_weights({}, general, qa);
    } catch (const Error& e) {
        empty = e.code() == ErrorCode::EmptyCalibration;
    }
    c.expect(empty, "no samples raises EmptyCalibration");

    const auto input = parse_calibration_input(fixture_env::read_json(CTXSEARCH_DATA "/calibration/sample.json"));
    const auto sample = calibrate_engine_weights(input.samples, input.general, input.qa);
    double total = 0;
    for (const auto& id : input.general)
        total += sample.at(id);
    c.near(total, 1.0, 1e-12, "general weights sum");
    const std::string report = format_weight_report(sample);
    for (const char* line : {"google           0.41", "bing             0.30", "yahoo            0.29",
                             "stackoverflow    1.00"})
        c.expect(report.find(line) != std::string::npos, std::string("report line '") + line + "'");
}

void end_to_end(Check& c) {
    const auto& env = fixture_env::env();
    c.expect(env.gold.queries.size() == 25, "25 gold queries");
    std::map<std::string, std::map<std::string, RankedResults>> runs;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& nc : default_eval_configs()) {
            for (const auto& gq : env.gold.queries) {
                auto r = run_search(gq.query, nc.config, env.providers, env.options);
                if (pass == 0) {
                    const auto& want = env.expected["configs"][nc.name][gq.query_id];
                    c.expect(fixture_env::urls(r) == want.get<std::vector<std::string>>(),
                             nc.name + " " + gq.query_id + " ordering differs from the reference model");
                    runs[nc.name][gq.query_id] = std::move(r);
                } else {
                    c.expect(canonical_dump(json(r)) == canonical_dump(json(runs[nc.name][gq.query_id])),
                             nc.name + " " + gq.query_id + " differs between runs");
                }
            }
        }
    }
    const auto cnt = evaluate(runs["cnt"], env.gold, "cnt");
    const auto best = evaluate(runs["cnt,cxt,ser"], env.gold, "cnt,cxt,ser");
    c.expect(best.soln_10 >= cnt.soln_10, "context and recommendation solve at least as many in the top 10");
    c.expect(best.r_10 && cnt.r_10 && *best.r_10 <= *cnt.r_10, "context and recommendation rank solutions higher");

    const auto report = run_matrix(env.gold, default_eval_configs(), env.providers, env.options);
    const auto want = env.expected["report"].get<EvalReport>();
    c.expect(report.rows.size() == 7, "seven report rows");
    for (std::size_t i = 0; i < std::min(report.rows.size(), want.rows.size()); ++i) {
        c.expect(report.rows[i].config == want.rows[i].config, "row order");
        c.expect(report.rows[i].soln_10 == want.rows[i].soln_10, want.rows[i].config + " soln_10");
        c.near(report.rows[i].r_10.value_or(-1), want.rows[i].r_10.value_or(-1), 1e-9, want.rows[i].config + " r_10");
    }
    c.expect(json(report).get<EvalReport>() == report, "report JSON round trip");
}

void parser_corpus(Check& c) {
    const auto corpus = fixture_env::read_json(CTXSEARCH_TEST_DATA "/stacktrace_corpus.json");
    c.expect(corpus.size() == 30, "30 corpus cases");
    for (const auto& k : corpus) {
        const std::string name = k["name"];
        const std::string text = k["text"];
        if (!k["accept"].get<bool>()) {
            bool rejected = false;
            try {
                parse_stack_trace(text);
            } catch (const Error& e) {
                rejected = e.code() == ErrorCode::NotAStackTrace;
            }
            c.expect(rejected, name + " should be rejected");
            continue;
        }
        try {
            const auto t = parse_stack_trace(text);
            bool same = t.segments.size() == k["segments"].size();
            for (std::size_t i = 0; same && i < t.segments.size(); ++i) {
                const auto& want = k["segments"][i];
                same = t.segments[i].exception_type == want["type"].get<std::string>() &&
                       t.segments[i].frames.size() == want["frames"].get<std::size_t>() &&
                       (want["message"].is_null() ? !t.segments[i].message
                                                  : t.segments[i].message == want["message"].get<std::string>());
            }
            c.expect(same, name + " parsed differently");
            c.expect(parse_stack_trace(render_stack_trace(t)).segments == t.segments, name + " round trip");
        } catch (const std::exception& e) {
            c.expect(false, name + ": " + e.what());
        }
    }
    std::mt19937_64 rng(109);
    for (int i = 0; i < 500; ++i) {
        const auto t = gen::trace(rng);
        c.expect(parse_stack_trace(t.raw) == t, "random trace round trip " + std::to_string(i));
    }
}

void service_contract(Check& c) {
    const auto& env = fixture_env::env();
    auto svc = std::make_shared<const SearchService>(AppConfig{}, env.providers, env.options.pages, env.store);
    HttpServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    c.expect(port > 0, "bind to a free port");
    if (port <= 0)
        return;
    std::thread loop([&] { server.listen(); });
    server.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(std::chrono::seconds(30));

    const auto& gq = env.gold.queries.front();
    json req{{"error_message", gq.query.message}};
    if (gq.query.raw_stack_trace)
        req["stack_trace"] = *gq.query.raw_stack_trace;
    if (gq.query.code_context)
        req["code_context"] = *gq.query.code_context;
    auto ok = client.Post("/api/v1/search", req.dump(), "application/json");
    c.expect(ok && ok->status == 200, "valid search answers 200");
    if (ok && ok->status == 200) {
        const auto body = json::parse(ok->body, nullptr, false);
        const auto errs = schema::search_response_errors(body);
        for (const auto& e : errs)
            c.expect(false, "schema: " + e);
        c.expect(errs.empty(), "response conforms to the schema");
        auto again = client.Post("/api/v1/search", req.dump(), "application/json");
        c.expect(again && again->body == ok->body, "identical requests give identical bodies");
    }
    auto bad = client.Post("/api/v1/search", R"({"error_message":""})", "application/json");
    c.expect(bad && bad->status == 400, "empty message answers 400");
    auto health = client.Get("/api/v1/health");
    c.expect(health && health->status == 200, "health answers 200");
    server.stop();
    loop.join();

    ::unsetenv("CTXSEARCH_ACCEPTANCE_UNSET_KEY");
    AppConfig live;
    live.providers = {{"stackoverflow", 1.0, ProviderKind::live, "CTXSEARCH_ACCEPTANCE_UNSET_KEY"}};
    auto down = std::make_shared<const SearchService>(live, build_providers(live, nullptr));
    HttpServer down_server(down);
    const int down_port = down_server.bind("127.0.0.1", 0);
    std::thread down_loop([&] { down_server.listen(); });
    down_server.wait_until_ready();
    httplib::Client down_client("127.0.0.1", down_port);
    auto unavailable = down_client.Post("/api/v1/search", R"({"error_message":"java.lang.NullPointerException"})",
                                        "application/json");
    c.expect(unavailable && unavailable->status == 503, "no reachable provider answers 503");
    down_server.stop();
    down_loop.join();
}

} // namespace

int main() {
    spdlog::set_level(spdlog::level::warn);
    const std::vector<Criterion> criteria{
        {"scoring formulas reproduce the worked examples", 1, scoring_formulas},
        {"simhash and hamming agree with the reference on 1000 bags and 10000 pairs", 10, simhash_oracle},
        {"pagerank agrees with the dense reference on 100 corpora", 30, pagerank_oracle},
        {"score ranges, composites and monotonicity hold on random corpora", 30, score_invariants},
        {"engine weight calibration", 1, calibration},
        {"25 queries x 7 configurations rank deterministically as predicted", 60, end_to_end},
        {"stack trace parser corpus and round trips", 5, parser_corpus},
        {"HTTP search contract: 200 with schema, 400, 503", 30, service_contract},
    };

    int failed = 0;
    for (const auto& crit : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("unexpected exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(secs <= crit.budget_s, "took " + std::to_string(secs) + " s, budget " +
                                                std::to_string(crit.budget_s) + " s");
        const bool pass = check.ok();
        failed += pass ? 0 : 1;
        std::printf("%s  %-76s %7.3f s  (%d checks)\n", pass ? "PASS" : "FAIL", crit.name.c_str(), secs,
                    check.count());
        if (!pass)
            std::printf("      %s\n", check.summary().c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
