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
#ifndef MEMETIC_MEME_HPP
#define MEMETIC_MEME_HPP

#include "memetic/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memetic {

/// One ingested tweet row. Timestamps are UTC epoch seconds; an empty
/// retweet_of marks an original tweet.
struct TweetRecord {
    std::string tweet_id;
    std::int64_t timestamp = 0;
    std::string account_id;
    std::string country;     // ISO-3166 code or empty for unknown
    std::string retweet_of;  // referenced tweet_id or empty
    std::string text;
    bool dangling = false;   // retweet_of does not resolve within the corpus
};

struct RowError {
    std::size_t line = 0;
    std::string message;
};

struct Corpus {
    std::vector<TweetRecord> records;  // sorted by timestamp, input order preserved on ties
    std::vector<RowError> row_errors;
    std::size_t dangling_count = 0;
};

enum class CorpusFormat { Csv, Jsonl };

/// Parses "YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm|-hh:mm)" to UTC epoch
/// seconds (fractional seconds truncated). Throws ParseError.
std::int64_t parse_rfc3339(std::string_view text);

/// Canonical UTC form "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t epoch_seconds);

/// Reads a tweet corpus. Malformed rows are collected (with line numbers)
/// rather than fatal; more than 10% malformed aborts with ParseError.
/// Dangling retweet references are counted and flagged per record.
Corpus ingest(const std::string& path, CorpusFormat format);
Corpus ingest_text(std::string_view content, CorpusFormat format);

/// Inverse of ingest for well-formed corpora; CSV uses the fixed header
/// `tweet_id,timestamp,account_id,country,retweet_of,text`.
std::string serialize(const Corpus& corpus, CorpusFormat format);

/// Lowercased alphanumeric runs; non-ASCII bytes are kept as word
/// characters so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// Counters behind the meme score of one n-gram.
/// An account received the meme if any row it authored or retweeted
/// contains it; n_rtw counts receiving accounts with at least one retweet
/// carrying it, and s_nrtw = s_tnrtw - n_rtw.
struct MemeStats {
    std::vector<std::string> meme;
    long n_m     = 0;  // tweets containing the meme
    long n_corpus = 0; // tweets in the corpus
    long n_rtw   = 0;  // receiving accounts that retweeted it
    long n_tw    = 0;  // tweets carrying the meme
    long s_nrtw  = 0;  // receiving accounts that never retweeted it
    long s_tnrtw = 0;  // all accounts that received it
};

/// Tally the stats of one meme over the corpus. With global_baseline the
/// receiving population s_tnrtw is every account in the corpus instead of
/// the meme-specific one.
MemeStats collect_stats(const Corpus& corpus, const std::vector<std::string>& meme,
                        bool global_baseline = false);

/// All contiguous n-grams containing the root term, ranked by n_m
/// (ties lexicographic). n must lie in 1..4.
std::vector<MemeStats> extract_ngrams(const Corpus& corpus, const std::string& root, int n,
                                      bool global_baseline = false);

/// Frequency times propagation weight:
///   M_m = (n_m/n_corpus) * ((n_rtw/n_tw) / (s_nrtw/s_tnrtw)).
/// s_nrtw = 0 makes the weight infinite; the score is then flagged
/// undefined instead of returned as a number.
struct MemeScore {
    ScalarType f_m = 0;
    ScalarType p_m = 0;
    ScalarType m_m = 0;
    bool propagation_defined = true;
};

MemeScore meme_score(const MemeStats& stats);

/// Divides every count by the designated base row; the base maps to 1.
std::vector<std::pair<std::string, ScalarType>>
normalize_counts(const std::vector<std::pair<std::string, ScalarType>>& rows,
                 const std::string& base_label);

/// JSON report {root, n, memes: [{tokens, n_m, f_m, P_m, M_m,
/// display_score_1e4}]}; undefined scores render as null.
std::string score_report_json(const Corpus& corpus, const std::string& root, int n,
                              bool global_baseline = false);

} // namespace memetic

#endif // MEMETIC_MEME_HPP
