// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/url.hpp>

#include <ctxsearch/error.hpp>

#include <algorithm>
#include <cctype>
#include <vector>

namespace ctxsearch {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool is_scheme_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

// Length of a leading `scheme://`, or 0.
std::size_t scheme_prefix(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return 0;
    std::size_t i = 1;
    while (i < s.size() && is_scheme_char(s[i]))
        ++i;
    if (s.substr(i, 3) == "://")
        return i;
    return 0;
}

// "mailto:x", "javascript:y" and friends: a scheme with no authority.
bool is_opaque_uri(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0)
        return false;
    auto slash = s.find_first_of("/?#");
    if (slash != std::string_view::npos && slash < colon)
        return false;
    for (std::size_t i = 0; i < colon; ++i)
        if (!is_scheme_char(s[i]))
            return false;
    // host:port is not a scheme
    std::size_t j = colon + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
    bool port_like = j > colon + 1 && (j == s.size() || s[j] == '/' || s[j] == '?' || s[j] == '#');
    return !port_like;
}

bool valid_host(std::string_view host) {
    if (host.empty())
        return false;
    if (host.front() == '[')
        return host.back() == ']' && host.size() > 2;
    return std::all_of(host.begin(), host.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
    });
}

bool is_tracking_param(std::string_view key) {
    return key.starts_with("utm_") || key == "gclid" || key == "fbclid";
}

struct ParsedUrl {
    std::string scheme; // lowercase, may be empty
    std::string userinfo;
    std::string host;
    std::string port;
    std::string path;
    std::string query;
    bool has_query = false;
};

std::optional<ParsedUrl> parse(std::string_view input) {
    std::string_view s = trim(input);
    if (s.empty())
        return std::nullopt;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) < 0x20)
            return std::nullopt;

    ParsedUrl url;
    if (auto n = scheme_prefix(s)) {
        url.scheme = lower(s.substr(0, n));
        s.remove_prefix(n + 3);
    } else if (is_opaque_uri(s) || s.starts_with("/")) {
        return std::nullopt;
    }

    if (auto hash = s.find('#'); hash != std::string_view::npos)
        s = s.substr(0, hash);

    auto auth_end = s.find_first_of("/?");
    std::string_view authority = s.substr(0, auth_end);
    std::string_view rest = auth_end == std::string_view::npos ? std::string_view{} : s.substr(auth_end);

    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        url.userinfo = std::string(authority.substr(0, at));
        authority.remove_prefix(at + 1);
    }
    std::string_view host = authority;
    if (auto colon = authority.rfind(':');
        colon != std::string_view::npos && authority.find(']', colon) == std::string_view::npos) {
        std::string_view port = authority.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::nullopt;
        url.port = std::string(port);
        host = authority.substr(0, colon);
    }
    url.host = lower(host);
    if (!valid_host(url.host))
        return std::nullopt;

    auto q = rest.find('?');
    url.path = std::string(rest.substr(0, q));
    if (q != std::string_view::npos) {
        url.has_query = true;
        url.query = std::string(rest.substr(q + 1));
    }
    return url;
}

} // namespace

std::optional<std::string> try_canonicalize_url(std::string_view input) {
    auto url = parse(input);
    if (!url)
        return std::nullopt;

    const bool web = url->scheme.empty() || url->scheme == "http" || url->scheme == "https";
    std::string out;
    if (!web)
        out = url->scheme + "://";
    if (!url->userinfo.empty())
        out += url->userinfo + "@";
    out += url->host;
    if (!url->port.empty() && !(web && (url->port == "80" || url->port == "443")))
        out += ":" + url->port;

    std::string path = url->path;
    while (path.size() > 1 && path.back() == '/')
        path.pop_back();
    if (path.empty())
        path = "/";
    out += path;

    std::vector<std::string> params;
    std::string_view query = url->query;
    while (!query.empty()) {
        auto amp = query.find('&');
        std::string_view param = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        if (param.empty())
            continue;
        if (is_tracking_param(param.substr(0, param.find('='))))
            continue;
        params.emplace_back(param);
    }
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i < params.size(); ++i)
        out += (i == 0 ? "?" : "&") + params[i];
    return out;
}

std::string canonicalize_url(std::string_view url) {
    if (auto c = try_canonicalize_url(url))
        return *std::move(c);
    throw Error(ErrorCode::MalformedUrl, std::string(url));
}

std::optional<std::string> resolve_url(std::string_view base, std::string_view href) {
    href = trim(href);
    if (href.empty() || href.front() == '#')
        return std::nullopt;
    if (auto n = scheme_prefix(href)) {
        std::string scheme = lower(href.substr(0, n));
        if (scheme != "http" && scheme != "https")
            return std::nullopt;
        return std::string(href);
    }
    if (is_opaque_uri(href))
        return std::nullopt;

    std::string base_str(trim(base));
    if (!scheme_prefix(base_str))
        base_str = "http://" + base_str;
    auto b = parse(base_str);
    if (!b)
        return std::nullopt;
    const std::string scheme = b->scheme.empty() ? "http" : b->scheme;
    const std::string origin = scheme + "://" + b->host + (b->port.empty() ? "" : ":" + b->port);

    if (href.starts_with("//"))
        return scheme + ":" + std::string(href);
    if (href.front() == '?')
        return origin + (b->path.empty() ? "/" : b->path) + std::string(href);

    std::string path;
    std::string suffix;
    std::string_view h = href;
    if (auto qpos = h.find_first_of("?#"); qpos != std::string_view::npos) {
        suffix = std::string(h.substr(qpos));
        h = h.substr(0, qpos);
    }
    if (h.starts_with("/")) {
        path = std::string(h);
    } else {
        std::string dir = b->path.empty() ? "/" : b->path.substr(0, b->path.rfind('/') + 1);
        path = dir + std::string(h);
    }

    // collapse "." and ".." segments
    std::vector<std::string> segments;
    std::size_t pos = 1;
    while (pos <= path.size()) {
        auto next = path.find('/', pos);
        std::string seg = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (seg == "..") {
            if (!segments.empty())
                segments.pop_back();
        } else if (seg != ".") {
            segments.push_back(seg);
        }
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    std::string resolved;
    for (const auto& seg : segments)
        resolved += "/" + seg;
    if (resolved.empty())
        resolved = "/";
    return origin + resolved + suffix;
}

} // namespace ctxsearch
