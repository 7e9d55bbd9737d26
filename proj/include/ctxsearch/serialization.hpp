// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>
#include <ctxsearch/results.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <string>

// Canonical JSON for every domain type. Objects use nlohmann::json's default
// std::map storage, so keys always come out in lexicographic order. Absent
// optionals serialize as null.

namespace ctxsearch {

using nlohmann::json;

void to_json(json& j, const Frame& f);
void from_json(const json& j, Frame& f);
void to_json(json& j, const TraceSegment& s);
void from_json(const json& j, TraceSegment& s);
void to_json(json& j, const StackTrace& t);
void from_json(const json& j, StackTrace& t);
void to_json(json& j, const ErrorQuery& q);
/// Reads a query; a raw trace without `parsed_trace` is parsed on the way in.
void from_json(const json& j, ErrorQuery& q);
void to_json(json& j, const PageContent& c);
void from_json(const json& j, PageContent& c);
void to_json(json& j, const ResultEntry& e);
void from_json(const json& j, ResultEntry& e);
void to_json(json& j, const ScoreVector& v);
void from_json(const json& j, ScoreVector& v);
void to_json(json& j, const ScoreConfig& c);
/// Missing keys keep their defaults, so partial objects act as overrides.
void from_json(const json& j, ScoreConfig& c);
void to_json(json& j, const RankedItem& item);
void from_json(const json& j, RankedItem& item);
void to_json(json& j, const RankedResults& r);
void from_json(const json& j, RankedResults& r);

/// Applies the keys present in `j` on top of `base`; weight maps merge per key.
ScoreConfig merge_score_config(ScoreConfig base, const json& j);

/// Compact (or indented) dump; invalid UTF-8 in scraped text is replaced.
std::string canonical_dump(const json& j, int indent = -1);

/// ISO-8601 UTC with millisecond precision, e.g. 2013-06-01T12:00:00.000Z.
std::string format_timestamp(std::chrono::system_clock::time_point t);
std::chrono::system_clock::time_point parse_timestamp(const std::string& s);

} // namespace ctxsearch
