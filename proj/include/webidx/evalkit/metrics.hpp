#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webidx/error.hpp"
#include "webidx/interval_set.hpp"

namespace webidx::eval {

struct ScoreTriple {
    double precision = 0;
    double recall = 0;
    double f1 = 0;

    static ScoreTriple from_counts(std::size_t overlap, std::size_t predicted, std::size_t gold)
    {
        if (predicted == 0 && gold == 0) {
            return {1, 1, 1};
        }
        if (predicted == 0 || gold == 0) {
            return {};
        }
        ScoreTriple s;
        s.precision = static_cast<double>(overlap) / static_cast<double>(predicted);
        s.recall = static_cast<double>(overlap) / static_cast<double>(gold);
        s.f1 = s.precision + s.recall == 0 ? 0 : 2 * s.precision * s.recall / (s.precision + s.recall);
        return s;
    }
};

/// Multiset counts repeated tokens; set ignores repeats on both sides.
enum class TokenMatch : std::uint8_t { multiset, set };

/// Lowercased ASCII, ASCII punctuation deleted, split on whitespace.
inline std::vector<std::string> normalize_tokens(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        } else if (c < 0x80 && ((c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`')
                                || (c >= '{' && c <= '~'))) {
            continue;
        } else if (c >= 'A' && c <= 'Z') {
            cur += static_cast<char>(c - 'A' + 'a');
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

inline ScoreTriple token_score(std::string_view predicted, std::string_view gold,
                               TokenMatch match = TokenMatch::multiset)
{
    auto p = normalize_tokens(predicted);
    auto g = normalize_tokens(gold);
    std::sort(p.begin(), p.end());
    std::sort(g.begin(), g.end());
    if (match == TokenMatch::set) {
        p.erase(std::unique(p.begin(), p.end()), p.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    std::size_t overlap = 0;
    auto i = p.begin();
    auto j = g.begin();
    while (i != p.end() && j != g.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++overlap;
            ++i;
            ++j;
        }
    }
    return ScoreTriple::from_counts(overlap, p.size(), g.size());
}

/// Best F1 of `response` against any of the reference answers.
inline double qa_score(std::string_view response, std::span<const std::string> gold_answers,
                       TokenMatch match = TokenMatch::multiset)
{
    if (gold_answers.empty()) {
        throw EmptyGoldSet();
    }
    double best = 0;
    for (const auto& g : gold_answers) {
        best = std::max(best, token_score(response, g, match).f1);
    }
    return best;
}

/// Member-level precision/recall of a predicted index set against gold.
inline ScoreTriple interval_score(const IntervalSet& predicted, const IntervalSet& gold)
{
    std::size_t overlap = 0;
    for (const auto& iv : predicted.intervals()) {
        overlap += gold.clip(iv.lo, iv.hi).cardinality();
    }
    return ScoreTriple::from_counts(overlap, predicted.cardinality(), gold.cardinality());
}

/// Indices present in at least `threshold` of the `k` runs.
inline IntervalSet majority_vote(std::span<const IntervalSet> runs, std::size_t k, std::size_t threshold)
{
    if (runs.size() != k) {
        throw ArityMismatch("majority_vote got " + std::to_string(runs.size()) + " runs, expected "
                            + std::to_string(k));
    }
    if (threshold < 1 || threshold > k) {
        throw ArityMismatch("threshold " + std::to_string(threshold) + " outside 1.." + std::to_string(k));
    }
    // Sweep over interval endpoints: +1 at lo, -1 after hi.
    std::vector<std::pair<std::size_t, int>> events;
    for (const auto& run : runs) {
        for (const auto& iv : run.intervals()) {
            events.emplace_back(iv.lo, 1);
            events.emplace_back(iv.hi + 1, -1);
        }
    }
    std::sort(events.begin(), events.end());
    std::vector<Interval> raw;
    std::size_t depth = 0;
    std::size_t open = 0;
    for (std::size_t e = 0; e < events.size();) {
        const std::size_t at = events[e].first;
        const bool was = depth >= threshold;
        for (; e < events.size() && events[e].first == at; ++e) {
            depth = static_cast<std::size_t>(static_cast<long long>(depth) + events[e].second);
        }
        const bool now = depth >= threshold;
        if (!was && now) {
            open = at;
        } else if (was && !now) {
            raw.push_back({open, at - 1});
        }
    }
    return IntervalSet::canonicalize(std::move(raw));
}

/// Wall-clock seconds per page.
class LatencyStats {
public:
    void add(double seconds) { samples_.push_back(seconds); }
    const std::vector<double>& samples() const noexcept { return samples_; }
    std::size_t count() const noexcept { return samples_.size(); }

    double mean() const
    {
        if (samples_.empty()) {
            return 0;
        }
        double sum = 0;
        for (double s : samples_) {
            sum += s;
        }
        return sum / static_cast<double>(samples_.size());
    }

    double max() const { return samples_.empty() ? 0 : *std::max_element(samples_.begin(), samples_.end()); }

private:
    std::vector<double> samples_;
};

}  // namespace webidx::eval
