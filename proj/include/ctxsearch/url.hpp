// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ctxsearch {

/// Canonical identity of a result link, shared across providers.
///
/// Scheme and host are lowercased; http and https collapse to a scheme-less
/// `host/path` form; the fragment, default ports and tracking parameters
/// (`utm_*`, `gclid`, `fbclid`) are dropped; the remaining query parameters
/// are sorted and trailing slashes are removed from non-root paths. A root
/// path renders as `host/`. Idempotent.
///
/// Throws Error(MalformedUrl) when `url` cannot be read as a URL.
std::string canonicalize_url(std::string_view url);

/// Non-throwing variant.
std::optional<std::string> try_canonicalize_url(std::string_view url);

/// Resolves an anchor target against the absolute URL of the page holding it.
/// Returns nothing for non-navigational targets (`mailto:`, `javascript:`,
/// bare fragments) and unresolvable input.
std::optional<std::string> resolve_url(std::string_view base, std::string_view href);

} // namespace ctxsearch
