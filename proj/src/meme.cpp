/*
* Copyright (C) 2026 Memetic Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "memetic/meme.hpp"
#include "memetic/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace memetic {

namespace {

constexpr const char* csv_header = "tweet_id,timestamp,account_id,country,retweet_of,text";

// --- calendar arithmetic (proleptic Gregorian) ---

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

unsigned days_in_month(std::int64_t y, unsigned m)
{
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[m - 1];
}

bool parse_fixed_digits(std::string_view s, std::size_t pos, int width, long& out)
{
    out = 0;
    for (int i = 0; i < width; ++i) {
        if (pos + i >= s.size() || s[pos + i] < '0' || s[pos + i] > '9') {
            return false;
        }
        out = out * 10 + (s[pos + i] - '0');
    }
    return true;
}

} // namespace

std::int64_t parse_rfc3339(std::string_view text)
{
    long y, mo, da, ho, mi, se;
    const bool shape_ok =
        text.size() >= 20 && parse_fixed_digits(text, 0, 4, y) && text[4] == '-' &&
        parse_fixed_digits(text, 5, 2, mo) && text[7] == '-' && parse_fixed_digits(text, 8, 2, da) &&
        (text[10] == 'T' || text[10] == 't' || text[10] == ' ') &&
        parse_fixed_digits(text, 11, 2, ho) && text[13] == ':' &&
        parse_fixed_digits(text, 14, 2, mi) && text[16] == ':' &&
        parse_fixed_digits(text, 17, 2, se);
    if (!shape_ok) {
        throw ParseError("timestamp is not RFC 3339: '" + std::string(text) + "'");
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;  // fractional seconds are truncated
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            ++pos;
        }
        if (pos == start) {
            throw ParseError("empty fractional seconds in '" + std::string(text) + "'");
        }
    }
    long off_minutes = 0;
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    }
    else if (pos + 6 <= text.size() && (text[pos] == '+' || text[pos] == '-')) {
        long oh, om;
        if (!parse_fixed_digits(text, pos + 1, 2, oh) || text[pos + 3] != ':' ||
            !parse_fixed_digits(text, pos + 4, 2, om) || oh > 23 || om > 59) {
            throw ParseError("bad UTC offset in '" + std::string(text) + "'");
        }
        off_minutes = (text[pos] == '+' ? 1 : -1) * (oh * 60 + om);
        pos += 6;
    }
    else {
        throw ParseError("missing UTC designator in '" + std::string(text) + "'");
    }
    if (pos != text.size()) {
        throw ParseError("trailing characters in timestamp '" + std::string(text) + "'");
    }
    if (mo < 1 || mo > 12 || da < 1 ||
        da > static_cast<long>(days_in_month(y, static_cast<unsigned>(mo))) || ho > 23 ||
        mi > 59 || se > 59) {
        throw ParseError("calendar field out of range in '" + std::string(text) + "'");
    }
    const std::int64_t days =
        days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(da));
    return days * 86400 + ho * 3600 + mi * 60 + se - off_minutes * 60;
}

std::string format_rfc3339(std::int64_t epoch_seconds)
{
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem  = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
    return buf;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isalnum(c) != 0 || c >= 0x80) {
            current += static_cast<char>(std::tolower(c));
        }
        else {
            flush();
        }
    }
    flush();
    return tokens;
}

namespace {

// --- CSV machinery (RFC 4180 quoting) ---

struct RawRow {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

std::vector<RawRow> split_csv(std::string_view content)
{
    std::vector<RawRow> rows;
    RawRow row;
    row.line = 1;
    std::string field;
    bool quoted = false;
    bool any = false;
    std::size_t line = 1;

    std::size_t i = 0;
    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row = RawRow{};
        row.line = line;
        any = false;
    };
    while (i < content.size()) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                }
                else {
                    quoted = false;
                }
            }
            else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
        }
        else if (c == '"' && field.empty()) {
            quoted = true;
            any = true;
        }
        else if (c == ',') {
            end_field();
            any = true;
        }
        else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
                ++i;
            }
            ++line;
            if (any || !field.empty() || !row.fields.empty()) {
                end_row();
            }
            else {
                row.line = line;
            }
        }
        else {
            field += c;
            any = true;
        }
        ++i;
    }
    if (any || !field.empty() || !row.fields.empty()) {
        end_row();
    }
    return rows;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        }
        else {
            out += c;
        }
    }
    out += '"';
    return out;
}

TweetRecord record_from_fields(const std::vector<std::string>& f)
{
    if (f.size() != 6) {
        throw ParseError("expected 6 fields, got " + std::to_string(f.size()));
    }
    TweetRecord rec;
    rec.tweet_id = f[0];
    if (rec.tweet_id.empty()) {
        throw ParseError("tweet_id must not be empty");
    }
    rec.timestamp = parse_rfc3339(f[1]);
    rec.account_id = f[2];
    if (rec.account_id.empty()) {
        throw ParseError("account_id must not be empty");
    }
    rec.country = f[3];
    rec.retweet_of = f[4];
    rec.text = f[5];
    return rec;
}

TweetRecord record_from_json(const nlohmann::json& j)
{
    TweetRecord rec;
    rec.tweet_id = j.at("tweet_id").get<std::string>();
    if (rec.tweet_id.empty()) {
        throw ParseError("tweet_id must not be empty");
    }
    rec.timestamp = parse_rfc3339(j.at("timestamp").get<std::string>());
    rec.account_id = j.at("account_id").get<std::string>();
    if (rec.account_id.empty()) {
        throw ParseError("account_id must not be empty");
    }
    rec.country = j.value("country", "");
    rec.retweet_of = j.value("retweet_of", "");
    rec.text = j.value("text", "");
    return rec;
}

void finalize(Corpus& corpus, std::size_t attempted_rows)
{
    if (attempted_rows > 0 &&
        10 * corpus.row_errors.size() > attempted_rows) {
        throw ParseError("more than 10% malformed rows (" +
                         std::to_string(corpus.row_errors.size()) + " of " +
                         std::to_string(attempted_rows) + ")");
    }
    std::set<std::string> ids;
    for (const TweetRecord& r : corpus.records) {
        ids.insert(r.tweet_id);
    }
    for (TweetRecord& r : corpus.records) {
        if (!r.retweet_of.empty() && ids.count(r.retweet_of) == 0) {
            r.dangling = true;
            ++corpus.dangling_count;
        }
    }
    std::stable_sort(corpus.records.begin(), corpus.records.end(),
                     [](const TweetRecord& a, const TweetRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
}

} // namespace

Corpus ingest_text(std::string_view content, CorpusFormat format)
{
    Corpus corpus;
    std::size_t attempted = 0;
    std::set<std::string> seen_ids;

    if (format == CorpusFormat::Csv) {
        const std::vector<RawRow> rows = split_csv(content);
        if (rows.empty()) {
            return corpus;
        }
        std::string header;
        for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
            if (i > 0) {
                header += ',';
            }
            header += rows[0].fields[i];
        }
        if (header != csv_header) {
            throw ParseError("bad CSV header, expected '" + std::string(csv_header) + "'");
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            ++attempted;
            try {
                TweetRecord rec = record_from_fields(rows[i].fields);
                if (!seen_ids.insert(rec.tweet_id).second) {
                    throw ParseError("duplicate tweet_id '" + rec.tweet_id + "'");
                }
                corpus.records.push_back(std::move(rec));
            }
            catch (const ParseError& e) {
                corpus.row_errors.push_back({rows[i].line, e.what()});
            }
        }
    }
    else {
        std::size_t line = 0;
        std::size_t start = 0;
        while (start <= content.size()) {
            const std::size_t nl = content.find('\n', start);
            const std::string_view raw =
                content.substr(start, nl == std::string_view::npos ? nl : nl - start);
            start = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
            ++line;
            if (raw.find_first_not_of(" \t\r") == std::string_view::npos) {
                continue;
            }
            ++attempted;
            try {
                const auto j = nlohmann::json::parse(raw);
                TweetRecord rec = record_from_json(j);
                if (!seen_ids.insert(rec.tweet_id).second) {
                    throw ParseError("duplicate tweet_id '" + rec.tweet_id + "'");
                }
                corpus.records.push_back(std::move(rec));
            }
            catch (const nlohmann::json::exception& e) {
                corpus.row_errors.push_back({line, e.what()});
            }
            catch (const ParseError& e) {
                corpus.row_errors.push_back({line, e.what()});
            }
        }
    }
    finalize(corpus, attempted);
    return corpus;
}

Corpus ingest(const std::string& path, CorpusFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingest_text(buffer.str(), format);
}

std::string serialize(const Corpus& corpus, CorpusFormat format)
{
    std::string out;
    if (format == CorpusFormat::Csv) {
        out = csv_header;
        out += '\n';
        for (const TweetRecord& r : corpus.records) {
            out += csv_escape(r.tweet_id);
            out += ',';
            out += format_rfc3339(r.timestamp);
            out += ',';
            out += csv_escape(r.account_id);
            out += ',';
            out += csv_escape(r.country);
            out += ',';
            out += csv_escape(r.retweet_of);
            out += ',';
            out += csv_escape(r.text);
            out += '\n';
        }
    }
    else {
        for (const TweetRecord& r : corpus.records) {
            nlohmann::ordered_json j;
            j["tweet_id"]   = r.tweet_id;
            j["timestamp"]  = format_rfc3339(r.timestamp);
            j["account_id"] = r.account_id;
            j["country"]    = r.country;
            j["retweet_of"] = r.retweet_of;
            j["text"]       = r.text;
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

namespace {

bool contains_window(const std::vector<std::string>& tokens, const std::vector<std::string>& meme)
{
    if (meme.empty() || tokens.size() < meme.size()) {
        return false;
    }
    for (std::size_t i = 0; i + meme.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < meme.size(); ++k) {
            if (tokens[i + k] != meme[k]) {
                match = false;
                break;
            }
        }
        if (match) {
            return true;
        }
    }
    return false;
}

MemeStats stats_from_indices(const Corpus& corpus, const std::vector<std::string>& meme,
                             const std::vector<std::size_t>& indices, bool global_baseline)
{
    MemeStats stats;
    stats.meme     = meme;
    stats.n_corpus = static_cast<long>(corpus.records.size());
    stats.n_tw     = static_cast<long>(indices.size());
    stats.n_m      = stats.n_tw;

    std::set<std::string> received;
    std::set<std::string> retweeters;
    for (std::size_t idx : indices) {
        const TweetRecord& r = corpus.records[idx];
        received.insert(r.account_id);
        if (!r.retweet_of.empty()) {
            retweeters.insert(r.account_id);
        }
    }
    stats.n_rtw = static_cast<long>(retweeters.size());
    if (global_baseline) {
        std::set<std::string> all_accounts;
        for (const TweetRecord& r : corpus.records) {
            all_accounts.insert(r.account_id);
        }
        stats.s_tnrtw = static_cast<long>(all_accounts.size());
    }
    else {
        stats.s_tnrtw = static_cast<long>(received.size());
    }
    stats.s_nrtw = stats.s_tnrtw - stats.n_rtw;
    return stats;
}

} // namespace

MemeStats collect_stats(const Corpus& corpus, const std::vector<std::string>& meme,
                        bool global_baseline)
{
    if (meme.empty()) {
        throw DomainError("meme must contain at least one token");
    }
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        if (contains_window(tokenize(corpus.records[i].text), meme)) {
            indices.push_back(i);
        }
    }
    return stats_from_indices(corpus, meme, indices, global_baseline);
}

std::vector<MemeStats> extract_ngrams(const Corpus& corpus, const std::string& root, int n,
                                      bool global_baseline)
{
    const std::vector<std::string> root_tokens = tokenize(root);
    if (root_tokens.size() != 1) {
        throw DomainError("root must be a single nonempty word");
    }
    if (n < 1 || n > 4) {
        throw DomainError("n must lie in 1..4");
    }
    const std::string& root_word = root_tokens[0];

    std::map<std::vector<std::string>, std::vector<std::size_t>> candidates;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        const std::vector<std::string> tokens = tokenize(corpus.records[i].text);
        if (tokens.size() < static_cast<std::size_t>(n)) {
            continue;
        }
        std::set<std::vector<std::string>> in_this_tweet;
        for (std::size_t w = 0; w + n <= tokens.size(); ++w) {
            bool has_root = false;
            for (int k = 0; k < n; ++k) {
                if (tokens[w + k] == root_word) {
                    has_root = true;
                    break;
                }
            }
            if (has_root) {
                in_this_tweet.insert(
                    std::vector<std::string>(tokens.begin() + w, tokens.begin() + w + n));
            }
        }
        for (const auto& gram : in_this_tweet) {
            candidates[gram].push_back(i);
        }
    }

    std::vector<MemeStats> results;
    results.reserve(candidates.size());
    for (const auto& [gram, indices] : candidates) {
        results.push_back(stats_from_indices(corpus, gram, indices, global_baseline));
    }
    std::sort(results.begin(), results.end(), [](const MemeStats& a, const MemeStats& b) {
        if (a.n_m != b.n_m) {
            return a.n_m > b.n_m;
        }
        return a.meme < b.meme;
    });
    return results;
}

MemeScore meme_score(const MemeStats& stats)
{
    if (stats.n_corpus <= 0) {
        throw DomainError("meme score needs a nonempty corpus");
    }
    if (stats.n_tw <= 0) {
        throw DomainError("meme score needs n_tw > 0");
    }
    if (stats.s_tnrtw <= 0) {
        throw DomainError("meme score needs s_tnrtw > 0");
    }
    MemeScore score;
    score.f_m = static_cast<ScalarType>(stats.n_m) / static_cast<ScalarType>(stats.n_corpus);
    if (stats.s_nrtw == 0) {
        score.propagation_defined = false;
        score.p_m = std::numeric_limits<ScalarType>::quiet_NaN();
        score.m_m = std::numeric_limits<ScalarType>::quiet_NaN();
        return score;
    }
    const ScalarType uptake =
        static_cast<ScalarType>(stats.n_rtw) / static_cast<ScalarType>(stats.n_tw);
    const ScalarType baseline =
        static_cast<ScalarType>(stats.s_nrtw) / static_cast<ScalarType>(stats.s_tnrtw);
    score.p_m = uptake / baseline;
    score.m_m = score.f_m * score.p_m;
    return score;
}

std::vector<std::pair<std::string, ScalarType>>
normalize_counts(const std::vector<std::pair<std::string, ScalarType>>& rows,
                 const std::string& base_label)
{
    ScalarType base = 0;
    bool found = false;
    for (const auto& [label, count] : rows) {
        if (label == base_label) {
            base = count;
            found = true;
        }
    }
    if (!found) {
        throw DomainError("base row '" + base_label + "' not present");
    }
    if (!(base > 0)) {
        throw DomainError("base count must be > 0");
    }
    std::vector<std::pair<std::string, ScalarType>> out;
    out.reserve(rows.size());
    for (const auto& [label, count] : rows) {
        out.emplace_back(label, count / base);
    }
    return out;
}

std::string score_report_json(const Corpus& corpus, const std::string& root, int n,
                              bool global_baseline)
{
    const std::vector<MemeStats> memes = extract_ngrams(corpus, root, n, global_baseline);
    nlohmann::ordered_json j;
    j["root"]  = root;
    j["n"]     = n;
    j["memes"] = nlohmann::ordered_json::array();
    for (const MemeStats& stats : memes) {
        const MemeScore score = meme_score(stats);
        nlohmann::ordered_json entry;
        entry["tokens"] = stats.meme;
        entry["n_m"]    = stats.n_m;
        entry["f_m"]    = score.f_m;
        if (score.propagation_defined) {
            entry["P_m"] = score.p_m;
            entry["M_m"] = score.m_m;
            entry["display_score_1e4"] = score.m_m * 1e4;
        }
        else {
            entry["P_m"] = nullptr;
            entry["M_m"] = nullptr;
            entry["display_score_1e4"] = nullptr;
        }
        j["memes"].push_back(std::move(entry));
    }
    return j.dump(2) + "\n";
}

} // namespace memetic
