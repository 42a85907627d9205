#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace webidx {

/// Closed range of 1-based block indices.
struct Interval {
    std::size_t lo = 1;
    std::size_t hi = 1;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A set of block indices held in canonical form: sorted, disjoint and
/// non-adjacent intervals, so equal sets always have equal representations.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Accepts any list of intervals; those with lo == 0 or lo > hi are
    /// discarded, the rest are sorted and coalesced.
    static IntervalSet canonicalize(std::vector<Interval> raw)
    {
        std::erase_if(raw, [](const Interval& iv) { return iv.lo == 0 || iv.lo > iv.hi; });
        std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
            return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
        });
        IntervalSet out;
        for (const auto& iv : raw) {
            if (!out.items_.empty() && iv.lo <= out.items_.back().hi + 1) {
                out.items_.back().hi = std::max(out.items_.back().hi, iv.hi);
            } else {
                out.items_.push_back(iv);
            }
        }
        return out;
    }

    static IntervalSet from_members(std::span<const std::size_t> members)
    {
        std::vector<Interval> raw;
        raw.reserve(members.size());
        for (auto m : members) {
            raw.push_back({m, m});
        }
        return canonicalize(std::move(raw));
    }

    const std::vector<Interval>& intervals() const noexcept { return items_; }
    bool empty() const noexcept { return items_.empty(); }

    /// Number of member indices.
    std::size_t cardinality() const noexcept
    {
        std::size_t n = 0;
        for (const auto& iv : items_) {
            n += iv.hi - iv.lo + 1;
        }
        return n;
    }

    bool contains(std::size_t i) const noexcept
    {
        auto it = std::upper_bound(items_.begin(), items_.end(), i,
                                   [](std::size_t v, const Interval& iv) { return v < iv.lo; });
        return it != items_.begin() && std::prev(it)->hi >= i;
    }

    std::size_t max_member() const noexcept { return items_.empty() ? 0 : items_.back().hi; }

    std::vector<std::size_t> members() const
    {
        std::vector<std::size_t> out;
        out.reserve(cardinality());
        for (const auto& iv : items_) {
            for (std::size_t i = iv.lo; i <= iv.hi; ++i) {
                out.push_back(i);
            }
        }
        return out;
    }

    IntervalSet unite(const IntervalSet& other) const
    {
        std::vector<Interval> raw = items_;
        raw.insert(raw.end(), other.items_.begin(), other.items_.end());
        return canonicalize(std::move(raw));
    }

    IntervalSet clip(std::size_t lo, std::size_t hi) const
    {
        std::vector<Interval> raw;
        for (const auto& iv : items_) {
            const std::size_t a = std::max(iv.lo, lo);
            const std::size_t b = std::min(iv.hi, hi);
            if (a <= b) {
                raw.push_back({a, b});
            }
        }
        return canonicalize(std::move(raw));
    }

    /// `[[lo,hi],[lo,hi]]`, or `[]` when empty.
    std::string to_string() const
    {
        std::string out = "[";
        for (std::size_t k = 0; k < items_.size(); ++k) {
            if (k > 0) {
                out += ',';
            }
            out += '[' + std::to_string(items_[k].lo) + ',' + std::to_string(items_[k].hi) + ']';
        }
        out += ']';
        return out;
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> items_;
};

/// Union of per-chunk results.
inline IntervalSet merge_intervals(std::span<const IntervalSet> per_chunk)
{
    std::vector<Interval> raw;
    for (const auto& s : per_chunk) {
        raw.insert(raw.end(), s.intervals().begin(), s.intervals().end());
    }
    return IntervalSet::canonicalize(std::move(raw));
}

}  // namespace webidx
