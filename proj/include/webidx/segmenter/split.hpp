#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "webidx/dom/utf8.hpp"
#include "webidx/segmenter/block.hpp"

namespace webidx {

namespace detail {

// A run of pieces [first, last) holding `chars` visible characters.
struct Span {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t chars = 0;
};

class Splitter {
public:
    Splitter(std::string_view html, std::size_t limit)
        : html_(html), pieces_(markup::tokenize(html)), limit_(limit)
    {}

    std::vector<std::string_view> run()
    {
        std::vector<Span> atoms;
        for (const Span& sentence : cut(Span{0, pieces_.size(), 0}, Level::sentence)) {
            if (sentence.chars <= limit_) {
                atoms.push_back(sentence);
                continue;
            }
            for (const Span& word : cut(sentence, Level::word)) {
                if (word.chars <= limit_) {
                    atoms.push_back(word);
                    continue;
                }
                for (const Span& chunk : cut(word, Level::character)) {
                    atoms.push_back(chunk);
                }
            }
        }
        return pack(atoms);
    }

private:
    enum class Level { sentence, word, character };

    bool is_char(std::size_t i) const { return !pieces_[i].is_tag; }

    std::string_view text(std::size_t i) const
    {
        return html_.substr(pieces_[i].begin, pieces_[i].end - pieces_[i].begin);
    }

    bool is_space(std::size_t i) const
    {
        const auto t = text(i);
        return is_char(i) && t.size() == 1 && utf8::is_space(t[0]);
    }

    // Next visible character at or after i (before `last`), or `last`.
    std::size_t next_char(std::size_t i, std::size_t last) const
    {
        while (i < last && !is_char(i)) {
            ++i;
        }
        return i;
    }

    bool ends_sentence(std::size_t i, std::size_t last) const
    {
        const auto t = text(i);
        if (t == "\xE3\x80\x82" || t == "\xEF\xBC\x81" || t == "\xEF\xBC\x9F") {  // 。！？
            return true;
        }
        if (t != "." && t != "!" && t != "?") {
            return false;
        }
        const std::size_t n = next_char(i + 1, last);
        return n == last || is_space(n);
    }

    // Position just past trailing whitespace and closing tags after piece i.
    std::size_t extend_cut(std::size_t i, std::size_t last) const
    {
        std::size_t p = i + 1;
        for (;;) {
            while (p < last && pieces_[p].is_tag && pieces_[p].closing) {
                ++p;
            }
            if (p < last && is_space(p)) {
                ++p;
                continue;
            }
            return p;
        }
    }

    std::vector<Span> cut(Span whole, Level level) const
    {
        std::vector<Span> out;
        Span cur{whole.first, whole.first, 0};
        std::size_t i = whole.first;
        while (i < whole.last) {
            if (!is_char(i)) {
                ++i;
                continue;
            }
            ++cur.chars;
            bool boundary = false;
            switch (level) {
            case Level::sentence: boundary = ends_sentence(i, whole.last); break;
            case Level::word: {
                const std::size_t n = next_char(i + 1, whole.last);
                boundary = is_space(i) && n < whole.last && !is_space(n);
                break;
            }
            case Level::character: boundary = cur.chars == limit_; break;
            }
            if (!boundary) {
                ++i;
                continue;
            }
            std::size_t end = level == Level::character ? i + 1 : extend_cut(i, whole.last);
            if (level == Level::character) {
                while (end < whole.last && pieces_[end].is_tag && pieces_[end].closing) {
                    ++end;
                }
            }
            for (std::size_t k = i + 1; k < end; ++k) {
                cur.chars += is_char(k) ? 1 : 0;
            }
            cur.last = end;
            out.push_back(cur);
            cur = Span{end, end, 0};
            i = end;
        }
        cur.last = whole.last;
        if (cur.first < cur.last) {
            if (cur.chars == 0 && !out.empty()) {
                out.back().last = cur.last;  // trailing tags only
            } else {
                out.push_back(cur);
            }
        }
        return out;
    }

    std::vector<std::string_view> pack(const std::vector<Span>& atoms) const
    {
        std::vector<std::string_view> fragments;
        std::size_t first = 0;
        std::size_t chars = 0;
        bool open = false;
        auto emit = [&](std::size_t last) {
            const std::size_t b = pieces_[first].begin;
            const std::size_t e = last == pieces_.size() ? html_.size() : pieces_[last].begin;
            fragments.push_back(html_.substr(b, e - b));
        };
        for (const Span& a : atoms) {
            if (open && chars + a.chars > limit_) {
                emit(a.first);
                open = false;
            }
            if (!open) {
                first = a.first;
                chars = 0;
                open = true;
            }
            chars += a.chars;
        }
        if (open) {
            emit(pieces_.size());
        }
        return fragments;
    }

    std::string_view html_;
    std::vector<markup::Piece> pieces_;
    std::size_t limit_;
};

}  // namespace detail

/// Splits an oversized block into fragments of at most `cfg.max_block_chars`
/// visible characters: at sentence ends first, then at word boundaries, then
/// hard at the character limit. Fragments concatenate back to the original
/// inner_html byte for byte. Each fragment carries the source index; the
/// caller renumbers.
inline std::vector<ContentBlock> split_block(const ContentBlock& block, const SegmenterConfig& cfg,
                                             int split_id)
{
    if (markup::visible_length(block.inner_html) <= cfg.max_block_chars) {
        return {block};
    }
    const auto parts = detail::Splitter(block.inner_html, cfg.max_block_chars).run();
    std::vector<ContentBlock> out;
    out.reserve(parts.size());
    const int total = static_cast<int>(parts.size());
    for (int k = 0; k < total; ++k) {
        ContentBlock frag;
        frag.index = block.index;
        frag.tag = block.tag;
        frag.inner_html = std::string(parts[static_cast<std::size_t>(k)]);
        frag.split = SplitTag{split_id, k + 1, total};
        out.push_back(std::move(frag));
    }
    return out;
}

}  // namespace webidx
