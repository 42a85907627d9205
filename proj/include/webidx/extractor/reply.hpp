#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webidx/chunker.hpp"
#include "webidx/error.hpp"
#include "webidx/interval_set.hpp"

namespace webidx {

namespace detail {

using RawPair = std::pair<std::int64_t, std::int64_t>;

class ReplyCursor {
public:
    ReplyCursor(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

    std::size_t pos() const { return pos_; }

    // '[' ( ']' | pair (',' pair)* [','] ']' )
    std::optional<std::vector<RawPair>> list()
    {
        if (!eat('[')) {
            return std::nullopt;
        }
        std::vector<RawPair> pairs;
        space();
        if (eat(']')) {
            return pairs;
        }
        for (;;) {
            auto p = pair();
            if (!p) {
                return std::nullopt;
            }
            pairs.push_back(*p);
            space();
            if (eat(',')) {
                space();
                if (eat(']')) {
                    return pairs;
                }
                continue;
            }
            if (eat(']')) {
                return pairs;
            }
            return std::nullopt;
        }
    }

    // pair (',' pair)*  without an enclosing list, e.g. "[1,1], [3,5]"
    std::optional<std::vector<RawPair>> bare_pairs()
    {
        std::vector<RawPair> pairs;
        auto p = pair();
        if (!p) {
            return std::nullopt;
        }
        pairs.push_back(*p);
        for (;;) {
            const std::size_t save = pos_;
            space();
            if (!eat(',')) {
                pos_ = save;
                return pairs;
            }
            space();
            auto q = pair();
            if (!q) {
                pos_ = save;
                return pairs;
            }
            pairs.push_back(*q);
        }
    }

private:
    bool eat(char c)
    {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void space()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    std::optional<std::int64_t> integer()
    {
        bool negative = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            negative = s_[pos_] == '-';
            ++pos_;
        }
        const std::size_t begin = pos_;
        std::int64_t v = 0;
        constexpr std::int64_t kCap = std::int64_t{1} << 40;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = std::min(kCap, v * 10 + (s_[pos_] - '0'));
            ++pos_;
        }
        if (pos_ == begin) {
            return std::nullopt;
        }
        return negative ? -v : v;
    }

    std::optional<RawPair> pair()
    {
        if (!eat('[')) {
            return std::nullopt;
        }
        space();
        auto lo = integer();
        if (!lo) {
            return std::nullopt;
        }
        space();
        if (!eat(',')) {
            return std::nullopt;
        }
        space();
        auto hi = integer();
        if (!hi) {
            return std::nullopt;
        }
        space();
        if (!eat(']')) {
            return std::nullopt;
        }
        return RawPair{*lo, *hi};
    }

    std::string_view s_;
    std::size_t pos_;
};

inline bool na_token_at(std::string_view s, std::size_t i)
{
    if (s.compare(i, 2, "NA") != 0) {
        return false;
    }
    auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    const bool left = i == 0 || !word(s[i - 1]);
    const bool right = i + 2 >= s.size() || !word(s[i + 2]);
    return left && right;
}

inline IntervalSet clip_pairs(const std::vector<RawPair>& pairs, const Chunk& range)
{
    std::vector<Interval> kept;
    const auto lo_bound = static_cast<std::int64_t>(range.start);
    const auto hi_bound = static_cast<std::int64_t>(range.end);
    for (auto [lo, hi] : pairs) {
        if (lo > hi) {
            continue;
        }
        lo = std::max(lo, lo_bound);
        hi = std::min(hi, hi_bound);
        if (lo <= hi) {
            kept.push_back({static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)});
        }
    }
    return IntervalSet::canonicalize(std::move(kept));
}

}  // namespace detail

/// Reads a model reply. The first top-level bracketed pair list (or a bare
/// run of pairs such as "[1,1], [3,5]"), or a standalone NA, wins; any
/// surrounding chatter is ignored. Pairs are clipped to `range`, inverted
/// pairs dropped, and the result canonicalized.
inline IntervalSet parse_reply(std::string_view reply, const Chunk& range)
{
    int depth = 0;
    for (std::size_t i = 0; i < reply.size(); ++i) {
        const char c = reply[i];
        if (depth > 0) {
            depth += c == '[' ? 1 : (c == ']' ? -1 : 0);
            continue;
        }
        if (c == '[') {
            if (auto pairs = detail::ReplyCursor(reply, i).list()) {
                return detail::clip_pairs(*pairs, range);
            }
            if (auto pairs = detail::ReplyCursor(reply, i).bare_pairs()) {
                return detail::clip_pairs(*pairs, range);
            }
            depth = 1;
            continue;
        }
        if (detail::na_token_at(reply, i)) {
            return {};
        }
    }
    std::string excerpt(reply.substr(0, 80));
    throw UnparseableReply("no interval list or NA in reply: \"" + excerpt + "\"");
}

}  // namespace webidx
