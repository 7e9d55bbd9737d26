// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/html.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace ctxsearch::html {
namespace {

const std::map<std::string_view, std::string_view>& named_entities() {
    static const std::map<std::string_view, std::string_view> table{
        {"amp", "&"},        {"lt", "<"},          {"gt", ">"},          {"quot", "\""},
        {"apos", "'"},       {"nbsp", " "},        {"copy", "\xC2\xA9"}, {"reg", "\xC2\xAE"},
        {"hellip", "\xE2\x80\xA6"}, {"mdash", "\xE2\x80\x94"}, {"ndash", "\xE2\x80\x93"},
        {"lsquo", "\xE2\x80\x98"},  {"rsquo", "\xE2\x80\x99"}, {"ldquo", "\xE2\x80\x9C"},
        {"rdquo", "\xE2\x80\x9D"},  {"laquo", "\xC2\xAB"},     {"raquo", "\xC2\xBB"},
        {"middot", "\xC2\xB7"},     {"bull", "\xE2\x80\xA2"},  {"tab", "\t"},
        {"newline", "\n"},
    };
    return table;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool name_char(char c) {
    return !is_space(c) && c != '>' && c != '/' && c != '=' && c != '"' && c != '\'';
}

bool raw_text_element(std::string_view name) {
    return name == "script" || name == "style" || name == "textarea";
}

} // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        auto semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(text[i++]);
            continue;
        }
        std::string_view ref = text.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (ref.size() >= 2 && ref[0] == '#') {
            std::uint32_t cp = 0;
            const bool hex = ref[1] == 'x' || ref[1] == 'X';
            std::string_view digits = ref.substr(hex ? 2 : 1);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (!digits.empty() && ec == std::errc{} && p == digits.data() + digits.size()) {
                append_utf8(out, cp);
                decoded = true;
            }
        } else if (auto it = named_entities().find(ref); it != named_entities().end()) {
            out.append(it->second);
            decoded = true;
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string Token::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
        if (k == key)
            return v;
    return {};
}

std::vector<Token> tokenize(std::string_view doc) {
    std::vector<Token> tokens;
    std::string pending;
    auto flush_text = [&] {
        if (!pending.empty()) {
            Token t;
            t.text = std::move(pending);
            tokens.push_back(std::move(t));
            pending.clear();
        }
    };

    std::size_t i = 0;
    while (i < doc.size()) {
        if (doc[i] != '<') {
            pending.push_back(doc[i++]);
            continue;
        }
        // comments, doctype, processing instructions
        if (doc.substr(i, 4) == "<!--") {
            auto end = doc.find("-->", i + 4);
            flush_text();
            Token t;
            t.kind = Token::Kind::Comment;
            const auto len = end == std::string_view::npos ? std::string_view::npos : end - i - 4;
            t.text = std::string(doc.substr(i + 4, len));
            tokens.push_back(std::move(t));
            i = end == std::string_view::npos ? doc.size() : end + 3;
            continue;
        }
        if (i + 1 < doc.size() && (doc[i + 1] == '!' || doc[i + 1] == '?')) {
            auto end = doc.find('>', i);
            flush_text();
            i = end == std::string_view::npos ? doc.size() : end + 1;
            continue;
        }
        const bool closing = i + 1 < doc.size() && doc[i + 1] == '/';
        std::size_t n = i + (closing ? 2 : 1);
        if (n >= doc.size() || !std::isalpha(static_cast<unsigned char>(doc[n]))) {
            pending.push_back(doc[i++]);
            continue;
        }
        std::size_t name_end = n;
        while (name_end < doc.size() && name_char(doc[name_end]))
            ++name_end;

        Token tag;
        tag.kind = closing ? Token::Kind::EndTag : Token::Kind::StartTag;
        tag.name = lower(doc.substr(n, name_end - n));

        // attributes, quote-aware, up to the closing '>'
        std::size_t p = name_end;
        bool terminated = false;
        while (p < doc.size()) {
            while (p < doc.size() && is_space(doc[p]))
                ++p;
            if (p >= doc.size())
                break;
            if (doc[p] == '>') {
                terminated = true;
                ++p;
                break;
            }
            if (doc[p] == '/') {
                tag.self_closing = true;
                ++p;
                continue;
            }
            std::size_t k = p;
            while (k < doc.size() && name_char(doc[k]))
                ++k;
            if (k == p) { // stray quote or '='
                ++p;
                continue;
            }
            std::string key = lower(doc.substr(p, k - p));
            p = k;
            while (p < doc.size() && is_space(doc[p]))
                ++p;
            std::string value;
            if (p < doc.size() && doc[p] == '=') {
                ++p;
                while (p < doc.size() && is_space(doc[p]))
                    ++p;
                if (p < doc.size() && (doc[p] == '"' || doc[p] == '\'')) {
                    const char q = doc[p];
                    auto close = doc.find(q, p + 1);
                    if (close == std::string_view::npos)
                        close = doc.size();
                    value = decode_entities(doc.substr(p + 1, close - p - 1));
                    p = std::min(close + 1, doc.size());
                } else {
                    std::size_t v = p;
                    while (v < doc.size() && !is_space(doc[v]) && doc[v] != '>')
                        ++v;
                    value = decode_entities(doc.substr(p, v - p));
                    p = v;
                }
            }
            if (!closing)
                tag.attributes.emplace_back(std::move(key), std::move(value));
        }
        if (!terminated) {
            // unterminated tag at end of input: keep it as text
            pending.append(doc.substr(i));
            break;
        }
        flush_text();
        i = p;
        const bool raw = !closing && !tag.self_closing && raw_text_element(tag.name);
        const std::string name = tag.name;
        tokens.push_back(std::move(tag));
        if (raw) {
            std::string lowered = lower(doc.substr(i));
            auto end = lowered.find("</" + name);
            std::string_view body = doc.substr(i, end == std::string::npos ? std::string_view::npos : end);
            if (!body.empty()) {
                Token t;
                t.text = std::string(body);
                tokens.push_back(std::move(t));
            }
            if (end == std::string::npos) {
                i = doc.size();
            } else {
                auto gt = doc.find('>', i + end);
                Token close;
                close.kind = Token::Kind::EndTag;
                close.name = name;
                tokens.push_back(std::move(close));
                i = gt == std::string_view::npos ? doc.size() : gt + 1;
            }
        }
    }
    flush_text();
    return tokens;
}

} // namespace ctxsearch::html
