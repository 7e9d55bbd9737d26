// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace ctxsearch {

/// Token → occurrence count. Tokens are lowercase and at least two characters.
using TokenBag = std::map<std::string, std::int64_t>;

/// 64-bit SimHash fingerprint.
struct Fingerprint {
    std::uint64_t bits = 0;

    bool operator==(const Fingerprint&) const = default;
};

/// Splits on non-alphanumeric characters and camelCase humps, lowercases, and
/// drops tokens shorter than two characters and the frame keyword `at`.
/// Bytes outside ASCII act as separators.
TokenBag tokenize(std::string_view text);

/// Count-vector cosine in [0,1]; 0 when either bag is empty.
double cosine_similarity(const TokenBag& a, const TokenBag& b);

/// Seed mixed into every token hash. Changing it changes every fingerprint.
inline constexpr std::uint64_t kTokenHashSeed = 0x5eedc0de2013ULL;

/// FNV-1a over the token bytes, offset basis xor'd with the seed, followed by
/// the MurmurHash3 64-bit finalizer. Platform independent.
std::uint64_t hash64(std::string_view token, std::uint64_t seed = kTokenHashSeed);

/// Weighted SimHash: bit i is set iff the count-weighted sum of ±1 votes from
/// every token's hash bit i is strictly positive. An empty bag gives 0.
Fingerprint simhash(const TokenBag& bag);

int hamming(Fingerprint a, Fingerprint b);

/// 16-digit lowercase hex.
std::string to_hex(Fingerprint f);
Fingerprint fingerprint_from_hex(std::string_view hex);

} // namespace ctxsearch
