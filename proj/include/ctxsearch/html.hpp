// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctxsearch::html {

/// Decodes named (common subset), decimal and hex character references.
/// Unknown references are left as written.
std::string decode_entities(std::string_view text);

/// Escapes `&`, `<`, `>` and `"`.
std::string escape(std::string_view text);

struct Token {
    enum class Kind { Text, StartTag, EndTag, Comment };
    Kind kind = Kind::Text;
    std::string name; ///< lowercase tag name
    std::vector<std::pair<std::string, std::string>> attributes; ///< lowercase names, decoded values
    std::string text; ///< raw (undecoded) text for Text tokens
    bool self_closing = false;

    std::string attribute(std::string_view key) const;
};

/// Forgiving tokenizer: never fails, treats stray `<` as text, and returns the
/// contents of script/style/textarea as a single raw Text token.
std::vector<Token> tokenize(std::string_view document);

} // namespace ctxsearch::html
