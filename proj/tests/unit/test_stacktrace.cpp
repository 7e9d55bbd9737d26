// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/stacktrace.hpp>

#include "random_corpus.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <random>

using namespace ctxsearch;
using nlohmann::json;

namespace {

json load_corpus() {
    std::ifstream in(CTXSEARCH_TEST_DATA "/stacktrace_corpus.json");
    REQUIRE(in);
    return json::parse(in);
}

} // namespace

TEST_CASE("basic trace parses into one segment", "[stacktrace]") {
    auto t = parse_stack_trace("java.lang.NullPointerException\n\tat com.example.Foo.bar(Foo.java:42)");
    REQUIRE(t.segments.size() == 1);
    CHECK(t.segments[0].exception_type == "java.lang.NullPointerException");
    CHECK_FALSE(t.segments[0].message.has_value());
    REQUIRE(t.segments[0].frames.size() == 1);
    CHECK(t.segments[0].frames[0].line == 42);
}

TEST_CASE("caused-by starts a new segment", "[stacktrace]") {
    auto t = parse_stack_trace("java.lang.RuntimeException: x\n\tat a.B.c(B.java:1)\n\tat a.B.d(B.java:2)\n"
                               "Caused by: java.io.IOException\n\tat a.C.e(C.java:3)");
    REQUIRE(t.segments.size() == 2);
    CHECK(t.segments[0].frames.size() == 2);
    CHECK(t.segments[1].frames.size() == 1);
    CHECK(t.segments[1].exception_type == "java.io.IOException");
}

TEST_CASE("text without a header is not a trace", "[stacktrace]") {
    try {
        parse_stack_trace("hello world");
        FAIL("expected NotAStackTrace");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAStackTrace);
    }
}

TEST_CASE("parser corpus", "[stacktrace]") {
    const json corpus = load_corpus();
    REQUIRE(corpus.size() == 30);
    for (const auto& c : corpus) {
        const std::string name = c["name"];
        const std::string text = c["text"];
        INFO(name);
        if (!c["accept"].get<bool>()) {
            CHECK_THROWS_AS(parse_stack_trace(text), Error);
            continue;
        }
        StackTrace t = parse_stack_trace(text);
        REQUIRE(t.segments.size() == c["segments"].size());
        for (std::size_t i = 0; i < t.segments.size(); ++i) {
            const auto& want = c["segments"][i];
            CHECK(t.segments[i].exception_type == want["type"].get<std::string>());
            if (want["message"].is_null())
                CHECK_FALSE(t.segments[i].message.has_value());
            else
                CHECK(t.segments[i].message == want["message"].get<std::string>());
            CHECK(t.segments[i].frames.size() == want["frames"].get<std::size_t>());
        }
        if (c.contains("frame0")) {
            const auto& want = c["frame0"];
            REQUIRE_FALSE(t.segments[0].frames.empty());
            const Frame& f = t.segments[0].frames[0];
            CHECK(f.class_name == want["class"].get<std::string>());
            CHECK(f.method_name == want["method"].get<std::string>());
            CHECK(f.file == (want["file"].is_null() ? std::nullopt : std::optional(want["file"].get<std::string>())));
            CHECK(f.line == (want["line"].is_null() ? std::nullopt : std::optional(want["line"].get<int>())));
            CHECK(f.native_method == want["native"].get<bool>());
        }
        // Round trip through the canonical rendering.
        const std::string rendered = render_stack_trace(t);
        StackTrace again = parse_stack_trace(rendered);
        CHECK(again.segments == t.segments);
        CHECK(render_stack_trace(again) == rendered);
    }
}

TEST_CASE("render then parse is the identity on random traces", "[stacktrace]") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 500; ++i) {
        StackTrace t = gen::trace(rng);
        StackTrace back = parse_stack_trace(t.raw);
        CHECK(back == t);
    }
}

TEST_CASE("rendering without line numbers keeps the file", "[stacktrace]") {
    auto t = parse_stack_trace("x.YException: m\n\tat a.B.c(B.java:12)\n\tat a.B.d(Native Method)\n\tat a.B.e(Unknown Source)");
    CHECK(render_stack_trace(t, {.line_numbers = false}) ==
          "x.YException: m\n\tat a.B.c(B.java)\n\tat a.B.d(Native Method)\n\tat a.B.e(Unknown Source)");
}

TEST_CASE("raw text is the consumed lines", "[stacktrace]") {
    auto t = parse_stack_trace("intro\njava.lang.Error: e   \n\tat a.B.c(B.java:1)\nnot a frame");
    CHECK(t.raw == "java.lang.Error: e\n\tat a.B.c(B.java:1)");
}

TEST_CASE("detecting traces in content blocks", "[stacktrace]") {
    const std::string a = "java.lang.NullPointerException\n\tat a.B.c(B.java:1)";
    const std::string b = "java.lang.IllegalStateException: s\n\tat x.Y.z(Y.java:9)";
    CHECK(detect_stack_traces({a, "just some prose here"}).size() == 1);
    CHECK(detect_stack_traces({a, a}).size() == 1);
    auto both = detect_stack_traces({a, b});
    REQUIRE(both.size() == 2);
    CHECK(both[0].segments[0].exception_type == "java.lang.NullPointerException");
    CHECK(both[1].segments[0].exception_type == "java.lang.IllegalStateException");
    CHECK(detect_stack_traces({}).empty());
}

TEST_CASE("several traces in one block are found in order", "[stacktrace]") {
    const std::string text = "log start\njava.lang.Error: one\n\tat a.B.c(B.java:1)\nmore log\n"
                             "java.lang.RuntimeException: two\n\tat a.B.d(B.java:2)\n";
    auto found = find_stack_traces(text);
    REQUIRE(found.size() == 2);
    CHECK(found[0].segments[0].message == "one");
    CHECK(found[1].segments[0].message == "two");
}

TEST_CASE("prose scanning needs frames", "[stacktrace]") {
    CHECK(find_stack_traces("java.lang.OutOfMemoryError: Java heap space", false).size() == 1);
    CHECK(find_stack_traces("java.lang.OutOfMemoryError: Java heap space", true).empty());
}
