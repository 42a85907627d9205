#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "webidx/dom/utf8.hpp"
#include "webidx/extractor/backend.hpp"

namespace webidx {

struct LexicalConfig {
    double top_fraction = 0.2;    ///< share of the chunk's blocks kept in query mode
    double k1 = 1.2;
    double b = 0.75;
    std::size_t min_main_chars = 30;
};

namespace detail {

/// Lowercased alphanumeric runs; non-ASCII bytes count as word characters.
inline std::vector<std::string> terms(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (std::isalnum(u) || u >= 0x80) {
            cur += static_cast<char>(std::tolower(u));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

inline bool main_content_tag(std::string_view tag)
{
    static constexpr std::string_view kTags[] = {"p",  "h1", "h2", "h3", "h4",         "h5",
                                                 "h6", "li", "tr", "blockquote", "pre", "figure"};
    return std::find(std::begin(kTags), std::end(kTags), tag) != std::end(kTags);
}

// Tag a block presents to the reader: for a wrapper such as
// <ul><li>…</li></ul> that is the wrapped child's tag.
inline std::string_view inner_tag(const ContentBlock& b)
{
    const std::string_view html = b.inner_html;
    if (!html.starts_with('<') || html.starts_with("</")) {
        return {};
    }
    std::size_t end = 1;
    while (end < html.size() && std::isalnum(static_cast<unsigned char>(html[end]))) {
        ++end;
    }
    return html.substr(1, end - 1);
}

}  // namespace detail

/// Offline stand-in for a model. Query mode scores blocks with Okapi BM25
/// against the query (statistics taken over the chunk) and keeps those in
/// the top `top_fraction`; main-content mode keeps text-bearing content tags.
class LexicalBackend final : public ExtractorBackend {
public:
    explicit LexicalBackend(LexicalConfig cfg = {}) : cfg_(cfg) {}

    std::string predict(const PredictRequest& r) const override
    {
        std::vector<std::size_t> picked;
        if (r.query == nullptr || r.query->mode == QueryMode::main_content) {
            picked = main_content(r.blocks);
        } else {
            picked = by_relevance(r.query->text, r.blocks);
        }
        const auto set = IntervalSet::from_members(picked);
        return set.empty() ? std::string("NA") : set.to_string();
    }

    std::string name() const override { return "lexical"; }

    /// BM25 score of every block, in block order.
    std::vector<double> scores(std::string_view query, std::span<const ContentBlock> blocks) const
    {
        std::vector<std::string> q = detail::terms(query);
        std::sort(q.begin(), q.end());
        q.erase(std::unique(q.begin(), q.end()), q.end());

        std::vector<std::unordered_map<std::string, int>> tf(blocks.size());
        std::vector<double> len(blocks.size());
        std::unordered_map<std::string, int> df;
        double total_len = 0;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto words = detail::terms(markup::plain_text(blocks[k].inner_html));
            len[k] = static_cast<double>(words.size());
            total_len += len[k];
            for (const auto& w : words) {
                ++tf[k][w];
            }
            for (const auto& [w, n] : tf[k]) {
                ++df[w];
            }
        }
        const double n_docs = static_cast<double>(blocks.size());
        const double avg_len = blocks.empty() || total_len == 0 ? 1.0 : total_len / n_docs;

        std::vector<double> out(blocks.size(), 0.0);
        for (const auto& term : q) {
            const auto it = df.find(term);
            if (it == df.end()) {
                continue;
            }
            const double d = it->second;
            const double idf = std::log(1.0 + (n_docs - d + 0.5) / (d + 0.5));
            for (std::size_t k = 0; k < blocks.size(); ++k) {
                const auto hit = tf[k].find(term);
                if (hit == tf[k].end()) {
                    continue;
                }
                const double f = hit->second;
                out[k] += idf * f * (cfg_.k1 + 1)
                          / (f + cfg_.k1 * (1 - cfg_.b + cfg_.b * len[k] / avg_len));
            }
        }
        return out;
    }

private:
    std::vector<std::size_t> by_relevance(std::string_view query, std::span<const ContentBlock> blocks) const
    {
        const auto s = scores(query, blocks);
        std::vector<double> sorted = s;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        std::vector<std::size_t> picked;
        if (sorted.empty()) {
            return picked;
        }
        const auto keep = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(cfg_.top_fraction * static_cast<double>(s.size()))));
        const double threshold = sorted[std::min(keep, sorted.size()) - 1];
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k] > 0 && s[k] >= threshold) {
                picked.push_back(blocks[k].index);
            }
        }
        return picked;
    }

    std::vector<std::size_t> main_content(std::span<const ContentBlock> blocks) const
    {
        std::vector<std::size_t> picked;
        for (const auto& b : blocks) {
            const bool tag_ok = detail::main_content_tag(b.tag) || detail::main_content_tag(detail::inner_tag(b));
            if (tag_ok && utf8::length(markup::plain_text(b.inner_html)) >= cfg_.min_main_chars) {
                picked.push_back(b.index);
            }
        }
        return picked;
    }

    LexicalConfig cfg_;
};

}  // namespace webidx
