// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/providers.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/html.hpp>
#include <ctxsearch/url.hpp>

#include <httplib.h>

namespace ctxsearch {

using nlohmann::json;

namespace {

template <typename Client>
void apply_timeout(Client& cli, std::chrono::milliseconds timeout) {
    const auto secs = static_cast<time_t>(timeout.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
}

} // namespace

StackOverflowProvider::StackOverflowProvider(std::string api_key, std::chrono::milliseconds timeout,
                                             std::string host)
    : api_key_(std::move(api_key)), timeout_(timeout), host_(std::move(host)) {}

std::vector<ProviderResult> StackOverflowProvider::search(std::string_view query, int limit) const {
    if (api_key_.empty())
        throw Error(ErrorCode::ProviderAuth, "stackoverflow: no API key configured");

    httplib::Client cli("https://" + host_);
    apply_timeout(cli, timeout_);
    httplib::Params params{{"order", "desc"},
                           {"sort", "relevance"},
                           {"q", std::string(query)},
                           {"site", "stackoverflow"},
                           {"pagesize", std::to_string(std::clamp(limit, 1, 100))},
                           {"filter", "withbody"},
                           {"key", api_key_}};
    auto res = cli.Get("/2.3/search/advanced", params, httplib::Headers{{"Accept-Encoding", "gzip"}});
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
            throw Error(ErrorCode::ProviderTimeout, "stackoverflow: " + httplib::to_string(err));
        throw Error(ErrorCode::ProviderUnavailable, "stackoverflow: " + httplib::to_string(err));
    }
    json body = json::parse(res->body, nullptr, false);
    if (res->status == 401 || res->status == 403 ||
        (body.is_object() && (body.value("error_name", "") == "key_invalid" ||
                              body.value("error_name", "") == "access_denied" ||
                              body.value("error_name", "") == "access_token_invalid")))
        throw Error(ErrorCode::ProviderAuth, "stackoverflow: credentials rejected");
    if (res->status != 200 || body.is_discarded())
        throw Error(ErrorCode::ProviderUnavailable, "stackoverflow: HTTP " + std::to_string(res->status));
    return parse_stackexchange_response(body, limit);
}

std::vector<ProviderResult> parse_stackexchange_response(const json& body, int limit) {
    std::vector<ProviderResult> out;
    auto items = body.find("items");
    if (items == body.end() || !items->is_array())
        throw Error(ErrorCode::ProviderUnavailable, "stackoverflow: response has no items");
    for (const auto& item : *items) {
        if (static_cast<int>(out.size()) >= limit)
            break;
        if (!item.contains("link"))
            continue;
        ProviderResult r;
        r.url = item.at("link").get<std::string>();
        r.title = html::decode_entities(item.value("title", std::string{}));
        r.position = static_cast<int>(out.size()) + 1;
        if (auto s = item.find("score"); s != item.end() && s->is_number_integer())
            r.so_votes = s->get<std::int64_t>();
        if (auto b = item.find("body"); b != item.end() && b->is_string())
            r.page_html = "<html><head><title>" + html::escape(r.title) + "</title></head><body>" +
                          b->get<std::string>() + "</body></html>";
        out.push_back(std::move(r));
    }
    return out;
}

PageSource http_page_source(std::chrono::milliseconds timeout) {
    return [timeout](const std::string&, const std::string& original) -> std::optional<RawPage> {
        std::string url = original;
        if (url.find("://") == std::string::npos)
            url = "https://" + url;
        const auto scheme_end = url.find("://");
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin = url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
        try {
            httplib::Client cli(origin);
            apply_timeout(cli, timeout);
            cli.set_follow_location(true);
            auto res = cli.Get(path);
            if (!res || res->status != 200)
                return std::nullopt;
            return RawPage{original, res->body, std::chrono::system_clock::now()};
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
}

} // namespace ctxsearch
