// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ctxsearch/extract.hpp>
#include <ctxsearch/model.hpp>
#include <ctxsearch/results.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch {

enum class ProviderKind { live, fixture };

struct ProviderDescriptor {
    std::string id;
    double weight = 1.0;
    ProviderKind kind = ProviderKind::fixture;
    /// Name of the environment variable holding the API key (live providers).
    std::string credentials_env;

    bool operator==(const ProviderDescriptor&) const = default;
};

struct ProviderResult {
    std::string url;
    std::string title;
    int position = 1;
    std::optional<std::string> snippet;
    std::optional<std::int64_t> so_votes;
    std::optional<std::int64_t> traffic_rank;
    /// Page markup delivered with the result (e.g. a question body), if any.
    std::optional<std::string> page_html;

    bool operator==(const ProviderResult&) const = default;
};

/// A search backend. Implementations must be callable from several threads
/// at once and signal failures with Error(ProviderTimeout | ProviderAuth |
/// ProviderUnavailable).
class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    virtual std::vector<ProviderResult> search(std::string_view query, int limit) const = 0;
};

struct ProviderHandle {
    ProviderDescriptor descriptor;
    std::shared_ptr<const SearchProvider> client;
};

/// Looks up a result page by canonical URL (the original URL is passed along
/// for fetchers that need a scheme).
using PageSource =
    std::function<std::optional<RawPage>(const std::string& canonical_url, const std::string& original_url)>;

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// Recorded provider responses:
///
///     { "queries": { "<query text>": { "<provider id>": [ {url, title, position,
///                    snippet, so_votes, traffic_rank}, ... ] } },
///       "pages":   { "<canonical url>": "<html>" } }
class FixtureStore {
public:
    FixtureStore() = default;
    explicit FixtureStore(const nlohmann::json& doc);

    /// Throws Error(IoFailure) when unreadable, Error(InvalidConfig) on schema errors.
    static std::shared_ptr<const FixtureStore> load(const std::filesystem::path& path);

    std::vector<ProviderResult> results(std::string_view provider_id, std::string_view query) const;
    std::optional<RawPage> page(const std::string& canonical_url) const;
    std::vector<std::string> query_texts() const;

    PageSource page_source() const;

private:
    std::map<std::string, std::map<std::string, std::vector<ProviderResult>>, std::less<>> queries_;
    std::map<std::string, std::string> pages_;
};

class FixtureProvider final : public SearchProvider {
public:
    FixtureProvider(std::shared_ptr<const FixtureStore> store, std::string provider_id)
        : store_(std::move(store)), id_(std::move(provider_id)) {}

    std::vector<ProviderResult> search(std::string_view query, int limit) const override;

private:
    std::shared_ptr<const FixtureStore> store_;
    std::string id_;
};

/// Fixture handles for every descriptor, sharing one store.
std::vector<ProviderHandle> fixture_providers(const std::vector<ProviderDescriptor>& descriptors,
                                              std::shared_ptr<const FixtureStore> store);

std::vector<ProviderDescriptor> default_provider_descriptors();

// ---------------------------------------------------------------------------
// Fetching
// ---------------------------------------------------------------------------

/// One provider call: at most `limit` results in rank order, positions ≥ 1.
/// Throws whatever the client throws.
std::vector<ProviderResult> fetch_results(const ProviderHandle& provider, std::string_view query, int limit);

struct FetchOptions {
    std::chrono::milliseconds timeout{5000};
    int retries = 1;
    int limit = 15;
};

struct FetchOutcome {
    std::string provider_id;
    ProviderStatus status = ProviderStatus::ok;
    std::vector<ProviderResult> results;
    std::string error;
};

/// Queries every provider concurrently. Each provider gets `options.timeout`
/// from the moment of the call, including retries; a provider still running
/// at its deadline is reported as `timeout` and its late answer discarded.
std::vector<FetchOutcome> fetch_all(const std::vector<ProviderHandle>& providers, std::string_view query,
                                    const FetchOptions& options);

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Merges provider result lists into a corpus keyed by canonical URL.
///
/// Each entry keeps the best position per provider. Title, snippet, votes and
/// traffic rank come from the highest-weight provider that supplied them (ties
/// broken by provider id). Page content is extracted from `raw_pages`, then
/// from markup delivered with a result, else built from title and snippet.
/// Results whose URL cannot be canonicalized are dropped.
Corpus aggregate(const ErrorQuery& query, const std::map<std::string, std::vector<ProviderResult>>& results,
                 const std::map<std::string, RawPage>& raw_pages,
                 const std::map<std::string, double>& provider_weights);

// ---------------------------------------------------------------------------
// Live clients
// ---------------------------------------------------------------------------

/// Stack Exchange question search (`/2.3/search/advanced`). Requires an API key;
/// question scores become `so_votes` and question bodies `page_html`.
class StackOverflowProvider final : public SearchProvider {
public:
    StackOverflowProvider(std::string api_key, std::chrono::milliseconds timeout,
                          std::string host = "api.stackexchange.com");

    std::vector<ProviderResult> search(std::string_view query, int limit) const override;

private:
    std::string api_key_;
    std::chrono::milliseconds timeout_;
    std::string host_;
};

/// Parses a Stack Exchange `items` response into ranked results.
std::vector<ProviderResult> parse_stackexchange_response(const nlohmann::json& body, int limit);

/// Fetches result pages over HTTP(S); failures yield no page.
PageSource http_page_source(std::chrono::milliseconds timeout);

} // namespace ctxsearch
