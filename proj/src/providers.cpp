// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/providers.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/url.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <thread>
#include <tuple>

namespace ctxsearch {

using nlohmann::json;

namespace {

ProviderResult result_from_json(const json& j) {
    ProviderResult r;
    r.url = j.at("url").get<std::string>();
    r.title = j.value("title", std::string{});
    r.position = j.at("position").get<int>();
    auto get_opt_str = [&](const char* key) -> std::optional<std::string> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null())
            return std::nullopt;
        return it->get<std::string>();
    };
    auto get_opt_int = [&](const char* key) -> std::optional<std::int64_t> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null())
            return std::nullopt;
        return it->get<std::int64_t>();
    };
    r.snippet = get_opt_str("snippet");
    r.so_votes = get_opt_int("so_votes");
    r.traffic_rank = get_opt_int("traffic_rank");
    r.page_html = get_opt_str("page_html");
    if (r.traffic_rank && *r.traffic_rank < 1)
        throw Error(ErrorCode::InvalidConfig, "traffic_rank must be >= 1 for " + r.url);
    return r;
}

} // namespace

FixtureStore::FixtureStore(const json& doc) {
    try {
        if (auto q = doc.find("queries"); q != doc.end()) {
            for (const auto& [text, per_provider] : q->items()) {
                auto& slot = queries_[text];
                for (const auto& [provider, list] : per_provider.items()) {
                    auto& results = slot[provider];
                    for (const auto& item : list)
                        results.push_back(result_from_json(item));
                }
            }
        }
        if (auto p = doc.find("pages"); p != doc.end()) {
            for (const auto& [url, html] : p->items()) {
                auto canon = try_canonicalize_url(url);
                if (!canon)
                    throw Error(ErrorCode::InvalidConfig, "fixture page key is not a URL: " + url);
                pages_[*canon] = html.get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("fixture schema: ") + e.what());
    }
}

std::shared_ptr<const FixtureStore> FixtureStore::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read fixtures " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "fixtures " + path.string() + ": " + e.what());
    }
    return std::make_shared<const FixtureStore>(doc);
}

std::vector<ProviderResult> FixtureStore::results(std::string_view provider_id, std::string_view query) const {
    auto q = queries_.find(query);
    if (q == queries_.end())
        return {};
    auto p = q->second.find(std::string(provider_id));
    if (p == q->second.end())
        return {};
    return p->second;
}

std::optional<RawPage> FixtureStore::page(const std::string& canonical_url) const {
    auto it = pages_.find(canonical_url);
    if (it == pages_.end())
        return std::nullopt;
    return RawPage{canonical_url, it->second, {}};
}

std::vector<std::string> FixtureStore::query_texts() const {
    std::vector<std::string> out;
    for (const auto& [text, _] : queries_)
        out.push_back(text);
    return out;
}

PageSource FixtureStore::page_source() const {
    return [this](const std::string& canonical, const std::string&) { return page(canonical); };
}

std::vector<ProviderResult> FixtureProvider::search(std::string_view query, int limit) const {
    auto results = store_->results(id_, query);
    std::stable_sort(results.begin(), results.end(),
                     [](const ProviderResult& a, const ProviderResult& b) { return a.position < b.position; });
    if (results.size() > static_cast<std::size_t>(std::max(limit, 0)))
        results.resize(static_cast<std::size_t>(limit));
    return results;
}

std::vector<ProviderHandle> fixture_providers(const std::vector<ProviderDescriptor>& descriptors,
                                              std::shared_ptr<const FixtureStore> store) {
    std::vector<ProviderHandle> out;
    for (const auto& d : descriptors)
        out.push_back({d, std::make_shared<FixtureProvider>(store, d.id)});
    return out;
}

std::vector<ProviderDescriptor> default_provider_descriptors() {
    std::vector<ProviderDescriptor> out;
    for (const auto& [id, w] : default_engine_weights())
        out.push_back({id, w, ProviderKind::fixture, {}});
    return out;
}

std::vector<ProviderResult> fetch_results(const ProviderHandle& provider, std::string_view query, int limit) {
    if (limit < 1)
        throw Error(ErrorCode::InvalidConfig, "result limit must be >= 1");
    auto results = provider.client->search(query, limit);
    std::erase_if(results, [](const ProviderResult& r) { return r.position < 1; });
    std::stable_sort(results.begin(), results.end(),
                     [](const ProviderResult& a, const ProviderResult& b) { return a.position < b.position; });
    if (results.size() > static_cast<std::size_t>(limit))
        results.resize(static_cast<std::size_t>(limit));
    return results;
}

std::vector<FetchOutcome> fetch_all(const std::vector<ProviderHandle>& providers, std::string_view query,
                                    const FetchOptions& options) {
    const auto deadline = std::chrono::steady_clock::now() + options.timeout;
    std::vector<std::future<FetchOutcome>> futures;
    futures.reserve(providers.size());

    for (const auto& provider : providers) {
        std::promise<FetchOutcome> promise;
        futures.push_back(promise.get_future());
        // Detached so that a provider stuck past its deadline cannot hold up the search.
        std::thread([provider, q = std::string(query), options, deadline, p = std::move(promise)]() mutable {
            FetchOutcome out{provider.descriptor.id, ProviderStatus::ok, {}, {}};
            for (int attempt = 0;; ++attempt) {
                try {
                    out.results = fetch_results(provider, q, options.limit);
                    out.status = ProviderStatus::ok;
                    out.error.clear();
                    break;
                } catch (const Error& e) {
                    out.status = e.code() == ErrorCode::ProviderTimeout ? ProviderStatus::timeout
                                                                        : ProviderStatus::error;
                    out.error = e.what();
                    const bool transient =
                        e.code() == ErrorCode::ProviderTimeout || e.code() == ErrorCode::ProviderUnavailable;
                    if (!transient || attempt >= options.retries || std::chrono::steady_clock::now() >= deadline)
                        break;
                } catch (const std::exception& e) {
                    out.status = ProviderStatus::error;
                    out.error = e.what();
                    break;
                }
            }
            p.set_value(std::move(out));
        }).detach();
    }

    std::vector<FetchOutcome> outcomes;
    outcomes.reserve(providers.size());
    for (std::size_t i = 0; i < providers.size(); ++i) {
        if (futures[i].wait_until(deadline) == std::future_status::ready) {
            outcomes.push_back(futures[i].get());
        } else {
            outcomes.push_back({providers[i].descriptor.id, ProviderStatus::timeout, {}, "deadline exceeded"});
        }
    }
    return outcomes;
}

Corpus aggregate(const ErrorQuery& query, const std::map<std::string, std::vector<ProviderResult>>& results,
                 const std::map<std::string, RawPage>& raw_pages,
                 const std::map<std::string, double>& provider_weights) {
    auto weight_of = [&](const std::string& id) {
        auto it = provider_weights.find(id);
        return it == provider_weights.end() ? 0.0 : it->second;
    };
    std::vector<std::string> order;
    for (const auto& [id, _] : results)
        order.push_back(id);
    std::stable_sort(order.begin(), order.end(),
                     [&](const std::string& a, const std::string& b) { return weight_of(a) > weight_of(b); });

    struct Pending {
        ResultEntry entry;
        bool have_title = false;
        std::optional<std::string> snippet;
        std::optional<std::string> html;
        std::string first_url;
    };
    std::map<std::string, Pending> merged;

    for (const auto& provider_id : order) {
        // Within a provider the best-placed result supplies the signals.
        std::vector<const ProviderResult*> ranked;
        for (const auto& r : results.at(provider_id))
            ranked.push_back(&r);
        std::stable_sort(ranked.begin(), ranked.end(), [](const ProviderResult* a, const ProviderResult* b) {
            return std::tie(a->position, a->url) < std::tie(b->position, b->url);
        });
        for (const ProviderResult* rp : ranked) {
            const ProviderResult& r = *rp;
            auto canon = try_canonicalize_url(r.url);
            if (!canon || r.position < 1)
                continue;
            auto& p = merged[*canon];
            auto& e = p.entry;
            if (e.canonical_url.empty()) {
                e.canonical_url = *canon;
                p.first_url = r.url;
            }
            e.original_urls.insert(r.url);
            auto [pos, inserted] = e.per_provider_positions.emplace(provider_id, r.position);
            if (!inserted)
                pos->second = std::min(pos->second, r.position);
            if (!p.have_title && !r.title.empty()) {
                e.title = r.title;
                p.have_title = true;
            }
            if (!p.snippet && r.snippet)
                p.snippet = r.snippet;
            if (!e.so_votes && r.so_votes)
                e.so_votes = r.so_votes;
            if (!e.traffic_rank && r.traffic_rank)
                e.traffic_rank = r.traffic_rank;
            if (!p.html && r.page_html)
                p.html = r.page_html;
        }
    }

    Corpus corpus;
    corpus.query = query;
    corpus.built_at = std::chrono::system_clock::now();
    corpus.entries.reserve(merged.size());
    for (auto& [canon, p] : merged) {
        std::optional<RawPage> page;
        if (auto it = raw_pages.find(canon); it != raw_pages.end())
            page = it->second;
        else if (p.html)
            page = RawPage{p.first_url, *p.html, corpus.built_at};

        if (page) {
            auto extracted = extract_page(*page);
            p.entry.content = std::move(extracted.content);
            if (!p.have_title)
                p.entry.title = extracted.title;
        } else {
            std::string text = p.entry.title;
            if (p.snippet)
                text += (text.empty() ? "" : " ") + *p.snippet;
            p.entry.content.body_text = std::move(text);
        }
        corpus.entries.push_back(std::move(p.entry));
    }
    return corpus;
}

} // namespace ctxsearch
