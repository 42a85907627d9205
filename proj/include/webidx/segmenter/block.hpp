#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webidx/dom/entities.hpp"
#include "webidx/dom/utf8.hpp"
#include "webidx/error.hpp"

namespace webidx {

/// Marks one fragment of a block that was too long to keep whole.
struct SplitTag {
    int id = 0;
    int part = 1;
    int total = 1;

    friend bool operator==(const SplitTag&, const SplitTag&) = default;
};

/// One addressable segment of a page.
struct ContentBlock {
    std::size_t index = 0;   ///< 1-based position in its sequence
    std::string tag;
    std::string inner_html;  ///< text plus retained formatting and image markup
    std::optional<SplitTag> split;

    friend bool operator==(const ContentBlock&, const ContentBlock&) = default;
};

struct BlockSequence {
    std::vector<ContentBlock> blocks;
    std::string title;
    std::string url;

    std::size_t size() const noexcept { return blocks.size(); }
    bool empty() const noexcept { return blocks.empty(); }
};

struct SegmenterConfig {
    std::size_t max_block_chars = 2000;

    void validate() const
    {
        if (max_block_chars < 64) {
            throw ConfigError("max_block_chars must be at least 64, got "
                              + std::to_string(max_block_chars));
        }
    }
};

namespace markup {

/// A run of inner_html: either a whole tag or one visible character (a code
/// point or a character reference).
struct Piece {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool is_tag = false;
    bool closing = false;  ///< end tag or <br>; sticks to the text before it
};

inline std::vector<Piece> tokenize(std::string_view html)
{
    std::vector<Piece> pieces;
    pieces.reserve(html.size());
    std::size_t pos = 0;
    while (pos < html.size()) {
        const char c = html[pos];
        if (c == '<') {
            const std::size_t gt = html.find('>', pos);
            if (gt != std::string_view::npos) {
                const std::string_view tag = html.substr(pos, gt + 1 - pos);
                const bool closing = tag.starts_with("</") || tag == "<br>" || tag == "<br/>";
                pieces.push_back({pos, gt + 1, true, closing});
                pos = gt + 1;
                continue;
            }
        }
        if (c == '&') {
            const std::size_t semi = html.find(';', pos);
            bool reference = semi != std::string_view::npos && semi - pos > 1 && semi - pos <= 12;
            for (std::size_t k = pos + 1; reference && k < semi; ++k) {
                reference = std::isalnum(static_cast<unsigned char>(html[k])) || html[k] == '#';
            }
            if (reference) {
                pieces.push_back({pos, semi + 1, false, false});
                pos = semi + 1;
                continue;
            }
        }
        const std::size_t begin = pos;
        utf8::next(html, pos);
        pieces.push_back({begin, pos, false, false});
    }
    return pieces;
}

/// Visible characters of inner_html; tags are not counted.
inline std::size_t visible_length(std::string_view html)
{
    std::size_t n = 0;
    for (const auto& p : tokenize(html)) {
        n += p.is_tag ? 0 : 1;
    }
    return n;
}

/// Plain text of inner_html: tags dropped (block-level and <br> tags become
/// spaces), image notation removed, entities decoded, whitespace collapsed.
inline std::string plain_text(std::string_view html)
{
    std::string raw;
    raw.reserve(html.size());
    std::size_t pos = 0;
    while (pos < html.size()) {
        if (html.compare(pos, 5, "<img>") == 0) {
            const std::size_t close = html.find("</img>", pos);
            pos = close == std::string_view::npos ? html.size() : close + 6;
            raw += ' ';
            continue;
        }
        if (html[pos] == '<') {
            const std::size_t gt = html.find('>', pos);
            if (gt != std::string_view::npos) {
                const std::string_view tag = html.substr(pos, gt + 1 - pos);
                std::size_t name_begin = tag.starts_with("</") ? 2 : 1;
                std::size_t name_end = name_begin;
                while (name_end < tag.size() && tag[name_end] != '>' && tag[name_end] != ' '
                       && tag[name_end] != '/') {
                    ++name_end;
                }
                const std::string_view name = tag.substr(name_begin, name_end - name_begin);
                static constexpr std::string_view kInline[] = {"b", "code", "em", "i", "s",
                                                               "strong", "sub", "sup", "u"};
                bool is_inline = false;
                for (auto t : kInline) {
                    is_inline = is_inline || t == name;
                }
                if (!is_inline) {
                    raw += ' ';
                }
                pos = gt + 1;
                continue;
            }
        }
        if (html[pos] == '&') {
            std::size_t p = pos;
            if (entities::decode_one(html, p, raw)) {
                pos = p;
                continue;
            }
        }
        raw += html[pos++];
    }
    std::string out;
    bool pending = false;
    for (char c : raw) {
        if (utf8::is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) {
            out += ' ';
            pending = false;
        }
        out += c;
    }
    return out;
}

}  // namespace markup

inline std::string render_line(const ContentBlock& b)
{
    std::string line = "[" + std::to_string(b.index) + "] <" + b.tag;
    if (b.split) {
        line += " split-id=\"" + std::to_string(b.split->id) + "\" split-part=\""
                + std::to_string(b.split->part) + "\" split-total=\""
                + std::to_string(b.split->total) + "\"";
    }
    line += '>';
    line += b.inner_html;
    line += "</" + b.tag + ">";
    return line;
}

/// One `[i] <tag>contents</tag>` line per block, newline separated.
inline std::string render_indexed(const BlockSequence& seq)
{
    std::string out;
    for (const auto& b : seq.blocks) {
        if (!out.empty()) {
            out += '\n';
        }
        out += render_line(b);
    }
    return out;
}

}  // namespace webidx
