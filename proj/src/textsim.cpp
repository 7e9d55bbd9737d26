// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/textsim.hpp>

#include <ctxsearch/error.hpp>

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace ctxsearch {
namespace {

bool is_alnum(char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::isalnum(u);
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

void emit(TokenBag& bag, std::string_view word) {
    if (word.size() < 2)
        return;
    std::string token(word);
    for (auto& c : token)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (token == "at")
        return;
    ++bag[token];
}

// Splits one alphanumeric run at camelCase boundaries: fooBar → foo|Bar,
// HTTPServer → HTTP|Server, a2B → a2|B.
void split_humps(TokenBag& bag, std::string_view word) {
    std::size_t start = 0;
    for (std::size_t i = 1; i < word.size(); ++i) {
        const char prev = word[i - 1];
        const char cur = word[i];
        bool boundary = false;
        if (is_upper(cur) && (is_lower(prev) || is_digit(prev)))
            boundary = true;
        else if (is_upper(prev) && is_upper(cur) && i + 1 < word.size() && is_lower(word[i + 1]))
            boundary = true;
        if (boundary) {
            emit(bag, word.substr(start, i - start));
            start = i;
        }
    }
    emit(bag, word.substr(start));
}

std::uint64_t fmix64(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
}

} // namespace

TokenBag tokenize(std::string_view text) {
    TokenBag bag;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i]))
            ++i;
        std::size_t j = i;
        while (j < text.size() && is_alnum(text[j]))
            ++j;
        if (j > i)
            split_humps(bag, text.substr(i, j - i));
        i = j;
    }
    return bag;
}

double cosine_similarity(const TokenBag& a, const TokenBag& b) {
    if (a.empty() || b.empty())
        return 0.0;
    double dot = 0, na = 0, nb = 0;
    for (const auto& [tok, c] : a) {
        na += static_cast<double>(c) * static_cast<double>(c);
        if (auto it = b.find(tok); it != b.end())
            dot += static_cast<double>(c) * static_cast<double>(it->second);
    }
    for (const auto& [tok, c] : b)
        nb += static_cast<double>(c) * static_cast<double>(c);
    // sqrt of the product keeps identical integer vectors at exactly 1
    double sim = dot / std::sqrt(na * nb);
    return sim > 1.0 ? 1.0 : (sim < 0.0 ? 0.0 : sim);
}

std::uint64_t hash64(std::string_view token, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (char c : token) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return fmix64(h);
}

Fingerprint simhash(const TokenBag& bag) {
    std::array<std::int64_t, 64> sums{};
    for (const auto& [tok, count] : bag) {
        const std::uint64_t h = hash64(tok);
        for (int bit = 0; bit < 64; ++bit)
            sums[static_cast<std::size_t>(bit)] += ((h >> bit) & 1U) ? count : -count;
    }
    Fingerprint f;
    for (int bit = 0; bit < 64; ++bit)
        if (sums[static_cast<std::size_t>(bit)] > 0)
            f.bits |= std::uint64_t{1} << bit;
    return f;
}

int hamming(Fingerprint a, Fingerprint b) {
    return std::popcount(a.bits ^ b.bits);
}

std::string to_hex(Fingerprint f) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.bits));
    return buf;
}

Fingerprint fingerprint_from_hex(std::string_view hex) {
    if (hex.size() != 16)
        throw Error(ErrorCode::InvalidConfig, "fingerprint must be 16 hex digits");
    Fingerprint f;
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else
            throw Error(ErrorCode::InvalidConfig, "fingerprint must be lowercase hex");
        f.bits = (f.bits << 4) | static_cast<std::uint64_t>(v);
    }
    return f;
}

} // namespace ctxsearch
