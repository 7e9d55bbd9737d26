// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/extract.hpp>

#include <ctxsearch/html.hpp>
#include <ctxsearch/url.hpp>

#include <cctype>
#include <set>

namespace ctxsearch {
namespace {

bool is_block_element(std::string_view name) {
    static const std::set<std::string_view> blocks{
        "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "footer",
        "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav",
        "ol", "p", "section", "table", "td", "th", "tr", "ul", "body", "html"};
    return blocks.contains(name);
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
        } else {
            if (space)
                out.push_back(' ');
            space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string tidy_block(std::string block) {
    if (block.starts_with("\r\n"))
        block.erase(0, 2);
    else if (block.starts_with("\n"))
        block.erase(0, 1);
    while (!block.empty() && std::isspace(static_cast<unsigned char>(block.back())))
        block.pop_back();
    return block;
}

bool blank(std::string_view s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

struct Region {
    std::string text;
    bool code;
};

} // namespace

ExtractedPage extract_page(const RawPage& page) {
    ExtractedPage out;
    const auto self = try_canonicalize_url(page.url);

    std::string body;
    std::string prose; // line-preserving text outside code, for trace scanning
    std::vector<Region> regions;
    std::string capture;
    int pre_depth = 0;
    int code_depth = 0;
    int hidden_depth = 0; // script / style
    bool in_title = false;
    bool have_title = false;
    std::string title;

    auto close_prose = [&] {
        if (!blank(prose))
            regions.push_back({prose, false});
        prose.clear();
    };
    auto close_capture = [&] {
        std::string block = tidy_block(std::move(capture));
        capture.clear();
        if (!blank(block)) {
            out.content.code_blocks.push_back(block);
            regions.push_back({std::move(block), true});
        }
    };

    for (const auto& tok : html::tokenize(page.html)) {
        using Kind = html::Token::Kind;
        if (tok.kind == Kind::Comment)
            continue;
        const bool capturing = pre_depth > 0 || code_depth > 0;
        if (tok.kind == Kind::Text) {
            if (hidden_depth > 0)
                continue;
            std::string text = html::decode_entities(tok.text);
            if (in_title) {
                title += text;
                continue;
            }
            body += text;
            if (capturing)
                capture += text;
            else
                prose += text;
            continue;
        }

        const std::string& name = tok.name;
        if (tok.kind == Kind::StartTag) {
            if (name == "script" || name == "style" || name == "textarea") {
                if (!tok.self_closing)
                    ++hidden_depth;
            } else if (name == "title") {
                in_title = !have_title && !tok.self_closing;
            } else if (name == "pre") {
                if (!capturing)
                    close_prose();
                ++pre_depth;
            } else if (name == "code") {
                if (!capturing) {
                    close_prose();
                    ++code_depth;
                }
            } else if (name == "a") {
                if (auto target = resolve_url(page.url, tok.attribute("href")))
                    if (auto canon = try_canonicalize_url(*target); canon && canon != self)
                        out.content.outlinks.insert(*canon);
            }
            if (is_block_element(name)) {
                body += ' ';
                if (capturing && name == "br")
                    capture += '\n';
                else if (!capturing)
                    prose += '\n';
            }
        } else if (tok.kind == Kind::EndTag) {
            if (name == "script" || name == "style" || name == "textarea") {
                if (hidden_depth > 0)
                    --hidden_depth;
            } else if (name == "title") {
                if (in_title) {
                    have_title = true;
                    in_title = false;
                }
            } else if (name == "pre") {
                if (pre_depth > 0 && --pre_depth == 0)
                    close_capture();
            } else if (name == "code") {
                if (pre_depth == 0 && code_depth > 0 && --code_depth == 0)
                    close_capture();
            }
            if (is_block_element(name)) {
                body += ' ';
                if (!capturing)
                    prose += '\n';
            }
        }
    }
    if (in_title)
        have_title = true;
    if (pre_depth > 0 || code_depth > 0)
        close_capture();
    close_prose();

    out.title = collapse_whitespace(title);
    out.content.body_text = collapse_whitespace(body);

    std::set<std::string> seen;
    for (const auto& region : regions)
        for (auto& trace : find_stack_traces(region.text, !region.code))
            if (seen.insert(trace.raw).second)
                out.content.stack_traces.push_back(std::move(trace));
    return out;
}

PageContent extract_page_content(const RawPage& page) {
    return extract_page(page).content;
}

} // namespace ctxsearch
