// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/model.hpp>
#include <ctxsearch/stacktrace.hpp>

#include <chrono>
#include <string>

namespace ctxsearch {

struct RawPage {
    std::string url;
    std::string html;
    std::chrono::system_clock::time_point fetched_at{};
};

struct ExtractedPage {
    std::string title;
    PageContent content;
};

/// Scrapes a fetched result page.
///
/// - title: text of the first `<title>` element
/// - code_blocks: `<pre>` elements and `<code>` elements outside a `<pre>`,
///   in document order, entity-decoded
/// - body_text: all visible text with tags stripped and whitespace collapsed
/// - stack_traces: traces found in code blocks, plus traces (header and at
///   least one frame) in the prose between them, in document order
/// - outlinks: canonical absolute anchor targets other than the page itself
///
/// Never fails; unparseable markup degrades to less content.
ExtractedPage extract_page(const RawPage& page);

PageContent extract_page_content(const RawPage& page);

} // namespace ctxsearch
