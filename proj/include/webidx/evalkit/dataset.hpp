#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "webidx/error.hpp"
#include "webidx/interval_set.hpp"

namespace webidx::eval {

class DatasetError : public Error {
public:
    using Error::Error;
};

/// One page with its gold selection, either as text or as block indices.
struct EvalRecord {
    std::string id;
    std::string url;
    std::string html;
    std::string query;  ///< empty for main-content extraction
    std::optional<std::string> gold_text;
    std::optional<IntervalSet> gold_intervals;
};

namespace detail {

inline std::string optional_string(const nlohmann::json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return {};
    }
    if (!it->is_string()) {
        throw DatasetError(std::string("field ") + key + " must be a string");
    }
    return it->get<std::string>();
}

inline IntervalSet intervals_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) {
        throw DatasetError("gold_intervals must be an array of [lo,hi] pairs");
    }
    std::vector<Interval> raw;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned()) {
            throw DatasetError("gold_intervals entries must be [lo,hi] with non-negative integers");
        }
        const auto lo = pair[0].get<std::size_t>();
        const auto hi = pair[1].get<std::size_t>();
        if (lo == 0 || lo > hi) {
            throw DatasetError("gold interval [" + std::to_string(lo) + "," + std::to_string(hi) + "] is invalid");
        }
        raw.push_back({lo, hi});
    }
    return IntervalSet::canonicalize(std::move(raw));
}

}  // namespace detail

inline nlohmann::json intervals_to_json(const IntervalSet& s)
{
    auto out = nlohmann::json::array();
    for (const auto& iv : s.intervals()) {
        out.push_back({iv.lo, iv.hi});
    }
    return out;
}

inline EvalRecord record_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) {
        throw DatasetError("record must be a JSON object");
    }
    EvalRecord r;
    r.id = detail::optional_string(j, "id");
    r.url = detail::optional_string(j, "url");
    r.html = detail::optional_string(j, "html");
    r.query = detail::optional_string(j, "query");
    if (j.contains("gold_text") && !j["gold_text"].is_null()) {
        r.gold_text = detail::optional_string(j, "gold_text");
    }
    if (j.contains("gold_intervals") && !j["gold_intervals"].is_null()) {
        r.gold_intervals = detail::intervals_from_json(j["gold_intervals"]);
    }
    if (r.gold_text.has_value() == r.gold_intervals.has_value()) {
        throw DatasetError("record needs exactly one of gold_text and gold_intervals");
    }
    return r;
}

inline nlohmann::json record_to_json(const EvalRecord& r)
{
    nlohmann::json j{{"id", r.id}, {"url", r.url}, {"html", r.html}, {"query", r.query}};
    if (r.gold_text) {
        j["gold_text"] = *r.gold_text;
    }
    if (r.gold_intervals) {
        j["gold_intervals"] = intervals_to_json(*r.gold_intervals);
    }
    return j;
}

/// Blank lines are skipped. Errors name the 1-based line.
inline std::vector<EvalRecord> read_jsonl(std::istream& in)
{
    std::vector<EvalRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const DatasetError& e) {
            throw DatasetError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline void write_jsonl(std::ostream& out, const std::vector<EvalRecord>& records)
{
    for (const auto& r : records) {
        out << record_to_json(r).dump() << '\n';
    }
}

}  // namespace webidx::eval
