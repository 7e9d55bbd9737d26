// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/store.hpp>

#include <ctxsearch/error.hpp>
#include <ctxsearch/scoring.hpp>
#include <ctxsearch/serialization.hpp>
#include <ctxsearch/url.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace ctxsearch {

namespace fs = std::filesystem;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("EVP_Digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

bool is_hex_id(const std::string& id) {
    return !id.empty() && id.size() <= 128 &&
           std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

void corrupt(const std::string& why) {
    throw Error(ErrorCode::CorruptRecord, why);
}

void write_atomically(const fs::path& target, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create " + target.parent_path().string() + ": " + ec.message());

    std::ostringstream tmp_name;
    tmp_name << "." << target.filename().string() << ".tmp." << ::getpid() << "."
             << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
    const fs::path tmp = target.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoFailure, "cannot rename into " + target.string());
    }
}

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ranked_before(const RankedItem& a, const RankedItem& b) {
    if (a.scores.s_final != b.scores.s_final)
        return a.scores.s_final > b.scores.s_final;
    if (a.scores.s_ser != b.scores.s_ser)
        return a.scores.s_ser > b.scores.s_ser;
    if (a.scores.s_cnt != b.scores.s_cnt)
        return a.scores.s_cnt > b.scores.s_cnt;
    return a.entry.canonical_url < b.entry.canonical_url;
}

} // namespace

std::string compute_run_id(const RankedResults& results) {
    return sha256_hex(canonical_dump(json(results)));
}

RunRecord make_run_record(RankedResults results, std::chrono::system_clock::time_point now) {
    RunRecord r;
    r.run_id = compute_run_id(results);
    r.results = std::move(results);
    r.created_at = std::chrono::time_point_cast<std::chrono::milliseconds>(now);
    return r;
}

void validate_ranked_results(const RankedResults& r) {
    try {
        r.query.validate();
        r.config_echo.validate();
    } catch (const Error& e) {
        corrupt(e.what());
    }
    std::set<std::string> urls;
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        const auto& item = r.items[i];
        if (item.rank != static_cast<int>(i) + 1)
            corrupt("ranks are not contiguous from 1");
        if (i > 0 && ranked_before(item, r.items[i - 1]))
            corrupt("items are not in ranking order");
        const auto& e = item.entry;
        if (!urls.insert(e.canonical_url).second)
            corrupt("duplicate canonical_url " + e.canonical_url);
        if (try_canonicalize_url(e.canonical_url) != e.canonical_url)
            corrupt("canonical_url is not canonical: " + e.canonical_url);
        for (const auto& u : e.original_urls)
            if (try_canonicalize_url(u) != e.canonical_url)
                corrupt("original url " + u + " does not canonicalize to " + e.canonical_url);
        if (e.per_provider_positions.empty())
            corrupt("entry without provider positions: " + e.canonical_url);
        for (const auto& [p, pos] : e.per_provider_positions)
            if (pos < 1)
                corrupt("position < 1 for " + e.canonical_url);
        if (e.traffic_rank && *e.traffic_rank < 1)
            corrupt("traffic_rank < 1 for " + e.canonical_url);
        for (const auto& link : e.content.outlinks)
            if (try_canonicalize_url(link) != link)
                corrupt("outlink is not canonical: " + link);
        for (const auto& t : e.content.stack_traces)
            if (t.segments.empty())
                corrupt("stack trace without segments");
        try {
            check_score_invariants(item.scores, r.config_echo);
        } catch (const std::logic_error& ex) {
            corrupt(ex.what());
        }
        if (item.scores.s_final < r.config_echo.min_final_score)
            corrupt("item below min_final_score");
    }
}

RankedResults parse_ranked_results(const json& doc) {
    RankedResults r;
    try {
        r = doc.get<RankedResults>();
    } catch (const json::exception& e) {
        corrupt(e.what());
    } catch (const Error& e) {
        corrupt(e.what());
    }
    validate_ranked_results(r);
    return r;
}

fs::path save_run(const RunRecord& record, const fs::path& root) {
    if (!is_hex_id(record.run_id))
        throw Error(ErrorCode::IoFailure, "run_id is not a hex digest");
    const fs::path path = root / "runs" / (record.run_id + ".json");
    json doc{{"run_id", record.run_id},
             {"created_at", format_timestamp(record.created_at)},
             {"results", record.results}};
    write_atomically(path, canonical_dump(doc));
    return path;
}

RunRecord load_run(const std::string& run_id, const fs::path& root) {
    if (!is_hex_id(run_id))
        throw Error(ErrorCode::NotFound, "no run " + run_id);
    const fs::path path = root / "runs" / (run_id + ".json");
    auto text = read_file(path);
    if (!text)
        throw Error(ErrorCode::NotFound, "no run " + run_id);

    json doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        corrupt("run " + run_id + " is not valid JSON");
    RunRecord rec;
    try {
        rec.run_id = doc.at("run_id").get<std::string>();
        rec.created_at = parse_timestamp(doc.at("created_at").get<std::string>());
        if (!doc.contains("results"))
            corrupt("run " + run_id + " has no results");
    } catch (const json::exception& e) {
        corrupt(e.what());
    }
    rec.results = parse_ranked_results(doc["results"]);
    if (rec.run_id != run_id || compute_run_id(rec.results) != run_id)
        corrupt("run " + run_id + " content does not match its id");
    return rec;
}

std::string query_hash(const ErrorQuery& query, const ScoreConfig& config) {
    return sha256_hex(canonical_dump(json{{"query", query}, {"config", config}}));
}

void cache_store(const std::string& hash, const RankedResults& results, const fs::path& root,
                 std::chrono::system_clock::time_point now) {
    if (!is_hex_id(hash))
        throw Error(ErrorCode::IoFailure, "query hash is not hex");
    json doc{{"stored_at", format_timestamp(now)}, {"results", results}};
    write_atomically(root / "cache" / (hash + ".json"), canonical_dump(doc));
}

std::optional<RankedResults> cache_lookup(const std::string& hash, std::chrono::milliseconds max_age,
                                          const fs::path& root, std::chrono::system_clock::time_point now) {
    if (!is_hex_id(hash))
        return std::nullopt;
    auto text = read_file(root / "cache" / (hash + ".json"));
    if (!text)
        return std::nullopt;
    try {
        json doc = json::parse(*text);
        const auto stored = parse_timestamp(doc.at("stored_at").get<std::string>());
        if (now - stored >= max_age)
            return std::nullopt;
        return parse_ranked_results(doc.at("results"));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace ctxsearch
