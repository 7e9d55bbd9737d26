// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch {

/// Parses the first Java-style stack trace found in `text`.
///
/// Grammar, one construct per line (leading whitespace ignored):
///
///     [Exception in thread "name" ]Qualified.Type[: message]
///     at pkg.Class.method(File.java:NN)   | (File.java) | (Unknown Source) | (Native Method)
///     Caused by: Qualified.Type[: message]
///     ... N more
///
/// A header with no frames is accepted only when its simple name ends in
/// `Exception`, `Error` or `Throwable`. The trace ends at the first line
/// outside the grammar. Throws Error(NotAStackTrace) when no header is found.
StackTrace parse_stack_trace(std::string_view text);

/// Every trace in `text`, in order. With `require_frames`, headers without at
/// least one frame line are skipped (used for free-running prose).
std::vector<StackTrace> find_stack_traces(std::string_view text, bool require_frames = false);

/// Applies the trace grammar to each block and returns all traces found, in
/// order, with identical raw traces reported once.
std::vector<StackTrace> detect_stack_traces(const std::vector<std::string>& content_blocks);

struct RenderOptions {
    bool line_numbers = true;
};

/// Canonical text form: header, tab-indented `at` frames, `Caused by:` segments.
/// `parse_stack_trace(render_stack_trace(t))` reproduces t's segments.
std::string render_stack_trace(const StackTrace& trace, RenderOptions options = {});

} // namespace ctxsearch
