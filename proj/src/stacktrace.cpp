// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/stacktrace.hpp>

#include <ctxsearch/error.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace ctxsearch {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string_view rtrim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    return lines;
}

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Length of the qualified identifier at the start of s (0 if none).
std::size_t qualified_ident_length(std::string_view s) {
    std::size_t i = 0;
    for (;;) {
        if (i >= s.size() || !ident_start(s[i]))
            return 0;
        while (i < s.size() && ident_char(s[i]))
            ++i;
        if (i + 1 < s.size() && s[i] == '.' && ident_start(s[i + 1])) {
            ++i;
            continue;
        }
        return i;
    }
}

bool throwable_name(std::string_view type) {
    auto dot = type.rfind('.');
    std::string_view simple = dot == std::string_view::npos ? type : type.substr(dot + 1);
    return simple.ends_with("Exception") || simple.ends_with("Error") || simple.ends_with("Throwable");
}

struct Header {
    std::string type;
    std::optional<std::string> message;
};

std::optional<Header> parse_header(std::string_view line) {
    line = trim(line);
    if (line.starts_with("Exception in thread \"")) {
        auto close = line.find('"', 21);
        if (close == std::string_view::npos)
            return std::nullopt;
        line = trim(line.substr(close + 1));
    }
    std::size_t n = qualified_ident_length(line);
    if (n == 0)
        return std::nullopt;
    Header h{std::string(line.substr(0, n)), std::nullopt};
    std::string_view rest = line.substr(n);
    if (rest.empty())
        return h;
    if (rest.front() != ':')
        return std::nullopt;
    std::string_view msg = trim(rest.substr(1));
    if (!msg.empty())
        h.message = std::string(msg);
    return h;
}

std::optional<Frame> parse_frame(std::string_view line) {
    line = trim(line);
    if (!line.starts_with("at ") && !line.starts_with("at\t"))
        return std::nullopt;
    line = trim(line.substr(3));
    auto open = line.find('(');
    auto close = line.find(')', open == std::string_view::npos ? 0 : open);
    if (open == std::string_view::npos || close == std::string_view::npos)
        return std::nullopt;
    std::string_view ref = trim(line.substr(0, open));
    if (auto slash = ref.rfind('/'); slash != std::string_view::npos)
        ref = ref.substr(slash + 1); // module prefix, e.g. java.base/
    auto dot = ref.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == ref.size())
        return std::nullopt;
    std::string_view cls = ref.substr(0, dot);
    std::string_view method = ref.substr(dot + 1);
    if (qualified_ident_length(cls) != cls.size())
        return std::nullopt;
    if (!std::all_of(method.begin(), method.end(), [](char c) { return ident_char(c) || c == '<' || c == '>'; }))
        return std::nullopt;

    Frame f{std::string(cls), std::string(method), std::nullopt, std::nullopt, false};
    std::string_view loc = trim(line.substr(open + 1, close - open - 1));
    if (loc == "Native Method") {
        f.native_method = true;
    } else if (loc == "Unknown Source" || loc.empty()) {
        // no location
    } else {
        auto colon = loc.rfind(':');
        if (colon != std::string_view::npos) {
            std::string_view num = loc.substr(colon + 1);
            int value = 0;
            auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
            if (ec != std::errc{} || p != num.data() + num.size() || value <= 0)
                return std::nullopt;
            f.line = value;
            loc = loc.substr(0, colon);
        }
        if (loc.empty() || loc.find_first_of(" \t") != std::string_view::npos)
            return std::nullopt;
        f.file = std::string(loc);
    }
    return f;
}

bool is_more_line(std::string_view line) {
    line = trim(line);
    if (!line.starts_with("..."))
        return false;
    line = trim(line.substr(3));
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
        ++i;
    return i > 0 && trim(line.substr(i)) == "more";
}

std::optional<Header> parse_caused_by(std::string_view line) {
    line = trim(line);
    if (!line.starts_with("Caused by:"))
        return std::nullopt;
    return parse_header(line.substr(10));
}

// Tries to read a trace whose header is lines[start]. On success returns the
// trace and sets `end` to one past its last line.
std::optional<StackTrace> read_trace(const std::vector<std::string_view>& lines, std::size_t start,
                                     bool require_frames, std::size_t& end) {
    auto header = parse_header(lines[start]);
    if (!header)
        return std::nullopt;

    StackTrace trace;
    trace.segments.push_back({header->type, header->message, {}});
    std::size_t i = start + 1;
    std::size_t frame_count = 0;
    for (; i < lines.size(); ++i) {
        if (auto frame = parse_frame(lines[i])) {
            trace.segments.back().frames.push_back(*std::move(frame));
            ++frame_count;
        } else if (auto cause = parse_caused_by(lines[i])) {
            trace.segments.push_back({cause->type, cause->message, {}});
        } else if (!is_more_line(lines[i])) {
            break;
        }
    }
    if (frame_count == 0 && (require_frames || !throwable_name(trace.segments.front().exception_type)))
        return std::nullopt;
    end = i;
    for (std::size_t k = start; k < end; ++k) {
        if (k != start)
            trace.raw.push_back('\n');
        trace.raw.append(rtrim(lines[k]));
    }
    return trace;
}

void render_header(std::string& out, const TraceSegment& seg) {
    out += seg.exception_type;
    if (seg.message) {
        out += ": ";
        out += *seg.message;
    }
}

} // namespace

std::vector<StackTrace> find_stack_traces(std::string_view text, bool require_frames) {
    std::vector<StackTrace> out;
    auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size()) {
        std::size_t end = i + 1;
        if (auto trace = read_trace(lines, i, require_frames, end)) {
            out.push_back(*std::move(trace));
            i = end;
        } else {
            ++i;
        }
    }
    return out;
}

StackTrace parse_stack_trace(std::string_view text) {
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::size_t end = 0;
        if (auto trace = read_trace(lines, i, false, end))
            return *std::move(trace);
    }
    throw Error(ErrorCode::NotAStackTrace, "no exception header found");
}

std::vector<StackTrace> detect_stack_traces(const std::vector<std::string>& content_blocks) {
    std::vector<StackTrace> out;
    std::set<std::string> seen;
    for (const auto& block : content_blocks)
        for (auto& trace : find_stack_traces(block))
            if (seen.insert(trace.raw).second)
                out.push_back(std::move(trace));
    return out;
}

std::string render_stack_trace(const StackTrace& trace, RenderOptions options) {
    std::string out;
    for (std::size_t s = 0; s < trace.segments.size(); ++s) {
        const auto& seg = trace.segments[s];
        if (s != 0)
            out += "\nCaused by: ";
        render_header(out, seg);
        for (const auto& f : seg.frames) {
            out += "\n\tat ";
            out += f.class_name;
            out += '.';
            out += f.method_name;
            out += '(';
            if (f.native_method) {
                out += "Native Method";
            } else if (f.file) {
                out += *f.file;
                if (f.line && options.line_numbers)
                    out += ":" + std::to_string(*f.line);
            } else {
                out += "Unknown Source";
            }
            out += ')';
        }
    }
    return out;
}

} // namespace ctxsearch
