// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/model.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/stacktrace.hpp>

#include <algorithm>
#include <cctype>

namespace ctxsearch {
namespace {

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

} // namespace

std::size_t count_lines(std::string_view text) {
    if (text.empty())
        return 0;
    std::size_t n = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    return text.back() == '\n' ? n : n + 1;
}

void ErrorQuery::validate() const {
    if (blank(message))
        throw Error(ErrorCode::InvalidQuery, "error message is empty");
    if (parsed_trace && !raw_stack_trace)
        throw Error(ErrorCode::InvalidQuery, "parsed trace without raw trace");
    if (code_context && count_lines(*code_context) > kMaxCodeContextLines)
        throw Error(ErrorCode::InvalidQuery, "code context exceeds 7 lines");
}

ErrorQuery make_query(std::string message, std::optional<std::string> raw_trace,
                      std::optional<std::string> code_context, std::vector<std::string>* warnings) {
    ErrorQuery q;
    q.message = std::move(message);
    if (raw_trace && !blank(*raw_trace)) {
        q.raw_stack_trace = std::move(raw_trace);
        try {
            q.parsed_trace = parse_stack_trace(*q.raw_stack_trace);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotAStackTrace)
                throw;
            if (warnings)
                warnings->push_back("stack_trace could not be parsed; searching without trace context");
        }
    }
    if (code_context && !blank(*code_context))
        q.code_context = std::move(code_context);
    q.validate();
    return q;
}

std::string code_context_window(std::string_view source, int line) {
    std::vector<std::string_view> lines;
    while (!source.empty()) {
        auto nl = source.find('\n');
        lines.push_back(source.substr(0, nl));
        source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
    }
    const int first = std::max(1, line - 3);
    const int last = std::min(static_cast<int>(lines.size()), line + 3);
    std::string out;
    for (int i = first; i <= last; ++i) {
        out.append(lines[static_cast<std::size_t>(i - 1)]);
        if (i != last)
            out.push_back('\n');
    }
    return out;
}

std::string_view to_string(Component c) {
    switch (c) {
    case Component::cnt: return "cnt";
    case Component::cxt: return "cxt";
    case Component::pop: return "pop";
    case Component::ser: return "ser";
    }
    return "?";
}

std::optional<Component> parse_component(std::string_view name) {
    for (auto c : {Component::cnt, Component::cxt, Component::pop, Component::ser})
        if (to_string(c) == name)
            return c;
    return std::nullopt;
}

std::set<Component> parse_component_list(std::string_view list) {
    std::set<Component> out;
    while (!list.empty()) {
        auto comma = list.find(',');
        std::string_view item = list.substr(0, comma);
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.remove_suffix(1);
        if (item.empty())
            continue;
        auto c = parse_component(item);
        if (!c)
            throw Error(ErrorCode::InvalidConfig, "unknown score component '" + std::string(item) + "'");
        out.insert(*c);
    }
    if (out.empty())
        throw Error(ErrorCode::InvalidConfig, "no score components selected");
    return out;
}

std::string component_list_name(const std::set<Component>& components) {
    std::string out;
    for (auto c : components) {
        if (!out.empty())
            out += ',';
        out += to_string(c);
    }
    return out;
}

std::map<std::string, double> default_engine_weights() {
    return {{"google", 0.41}, {"bing", 0.30}, {"yahoo", 0.29}, {"stackoverflow", 1.00}};
}

void ScoreConfig::validate() const {
    if (enabled_components.empty())
        throw Error(ErrorCode::InvalidConfig, "enabled_components is empty");
    for (const auto& [c, w] : component_weights)
        if (!(w >= 0.0))
            throw Error(ErrorCode::InvalidConfig, "negative weight for " + std::string(to_string(c)));
    for (const auto& [id, w] : engine_weights)
        if (!(w > 0.0 && w <= 1.0))
            throw Error(ErrorCode::InvalidConfig, "engine weight for " + id + " outside (0,1]");
    if (!(pagerank_damping > 0.0 && pagerank_damping < 1.0))
        throw Error(ErrorCode::InvalidConfig, "pagerank_damping outside (0,1)");
    if (!(pagerank_tolerance > 0.0))
        throw Error(ErrorCode::InvalidConfig, "pagerank_tolerance must be positive");
    if (!(min_final_score >= 0.0))
        throw Error(ErrorCode::InvalidConfig, "min_final_score must be non-negative");
}

double ScoreConfig::weight(Component c) const {
    auto it = component_weights.find(c);
    return it == component_weights.end() ? 1.0 : it->second;
}

} // namespace ctxsearch
