#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "webidx/evalkit/dataset.hpp"
#include "webidx/evalkit/metrics.hpp"
#include "webidx/pipeline.hpp"

namespace webidx::eval {

struct EvalOptions {
    std::size_t workers = 1;
    TokenMatch match = TokenMatch::multiset;
};

struct EvalRow {
    std::string id;
    ScoreTriple score;
    std::optional<bool> exact;  ///< set for records with gold_intervals
    IntervalSet predicted;
    std::size_t blocks = 0;
    double latency_seconds = 0;
    std::string error;  ///< non-empty when the record failed and scored 0
};

struct EvalSummary {
    std::size_t records = 0;
    std::size_t failed = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::size_t exact_records = 0;
    std::size_t exact_matches = 0;
    double mean_latency_seconds = 0;
    std::string backend;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    EvalSummary summary;
    LatencyStats latency;
};

/// Scores one record. Text gold is compared with the plain-text rendering;
/// interval gold by member sets.
inline EvalRow evaluate_record(const EvalRecord& rec, const Pipeline& pipeline, TokenMatch match = TokenMatch::multiset)
{
    EvalRow row;
    row.id = rec.id;
    bool unparseable = false;
    ExtractOptions opts;
    opts.on_unparseable = [&](const Chunk&, const UnparseableReply&) { unparseable = true; };
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const PipelineResult res = pipeline.run(rec.html, rec.query, OutputFormat::text, rec.url, &opts);
        row.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.predicted = res.indices;
        row.blocks = res.stats.blocks;
        if (unparseable) {
            row.error = "unparseable reply";
        } else if (rec.gold_intervals) {
            row.score = interval_score(res.indices, *rec.gold_intervals);
            row.exact = res.indices == *rec.gold_intervals;
        } else {
            row.score = token_score(res.content, *rec.gold_text, match);
        }
    } catch (const std::exception& e) {
        row.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.error = e.what();
    }
    if (!row.error.empty()) {
        row.score = {};
        if (rec.gold_intervals) {
            row.exact = false;
        }
    }
    return row;
}

inline EvalReport run_eval(const std::vector<EvalRecord>& records, const Pipeline& pipeline,
                           const EvalOptions& options = {})
{
    EvalReport report;
    report.rows.resize(records.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next.fetch_add(1); k < records.size(); k = next.fetch_add(1)) {
            report.rows[k] = evaluate_record(records[k], pipeline, options.match);
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(records.size(), 1));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    EvalSummary& s = report.summary;
    s.records = records.size();
    s.backend = pipeline.backend().name();
    for (const auto& row : report.rows) {
        report.latency.add(row.latency_seconds);
        s.failed += row.error.empty() ? 0 : 1;
        s.precision += row.score.precision;
        s.recall += row.score.recall;
        s.f1 += row.score.f1;
        if (row.exact) {
            ++s.exact_records;
            s.exact_matches += *row.exact ? 1 : 0;
        }
    }
    if (s.records > 0) {
        const auto n = static_cast<double>(s.records);
        s.precision /= n;
        s.recall /= n;
        s.f1 /= n;
    }
    s.mean_latency_seconds = report.latency.mean();
    return report;
}

inline nlohmann::json row_to_json(const EvalRow& row)
{
    nlohmann::json j{{"id", row.id},
                     {"precision", row.score.precision},
                     {"recall", row.score.recall},
                     {"f1", row.score.f1},
                     {"indices", intervals_to_json(row.predicted)},
                     {"blocks", row.blocks},
                     {"latency_s", row.latency_seconds},
                     {"failed", !row.error.empty()}};
    if (row.exact) {
        j["exact"] = *row.exact;
    }
    if (!row.error.empty()) {
        j["error"] = row.error;
    }
    return j;
}

inline nlohmann::json summary_to_json(const EvalSummary& s)
{
    nlohmann::json j{{"records", s.records},
                     {"failed", s.failed},
                     {"precision", s.precision},
                     {"recall", s.recall},
                     {"f1", s.f1},
                     {"mean_latency_s", s.mean_latency_seconds},
                     {"backend", s.backend}};
    if (s.exact_records > 0) {
        j["exact_match_rate"] = static_cast<double>(s.exact_matches) / static_cast<double>(s.exact_records);
    }
    return j;
}

/// One JSON object per record, then the summary object on the last line.
inline void write_report_jsonl(std::ostream& out, const EvalReport& report)
{
    for (const auto& row : report.rows) {
        out << row_to_json(row).dump() << '\n';
    }
    out << nlohmann::json{{"summary", summary_to_json(report.summary)}}.dump() << '\n';
}

namespace detail {

inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

}  // namespace detail

inline void write_report_csv(std::ostream& out, const EvalReport& report)
{
    out << "id,precision,recall,f1,exact,blocks,latency_s,error\n";
    for (const auto& row : report.rows) {
        out << detail::csv_field(row.id) << ',' << row.score.precision << ',' << row.score.recall << ','
            << row.score.f1 << ',' << (row.exact ? (*row.exact ? "1" : "0") : "") << ',' << row.blocks << ','
            << row.latency_seconds << ',' << detail::csv_field(row.error) << '\n';
    }
}

}  // namespace webidx::eval
