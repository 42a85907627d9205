#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "webidx/dom/entities.hpp"
#include "webidx/dom/node.hpp"
#include "webidx/segmenter/block.hpp"
#include "webidx/segmenter/split.hpp"

namespace webidx {

/// `<img>image: {src}, caption: {caption}</img>`, or nothing when either the
/// source or the caption is missing.
inline std::optional<std::string> format_image(const dom::DomNode& img, std::string_view caption)
{
    const std::string* src = img.attr("src");
    if (src == nullptr || src->empty()) {
        src = img.attr("data-src");
    }
    const std::string cap = dom::collapse_whitespace(caption);
    if (src == nullptr || dom::collapse_whitespace(*src).empty() || cap.empty()) {
        return std::nullopt;
    }
    return "<img>image: " + entities::escape_text(dom::collapse_whitespace(*src))
           + ", caption: " + entities::escape_text(cap) + "</img>";
}

namespace detail {

/// Writes the inline content of one block: formatting tags kept bare,
/// anchors reduced to their text, other inline tags stripped, whitespace
/// collapsed and trimmed.
class InlineWriter {
public:
    explicit InlineWriter(std::string_view figure_caption = {}) : figure_caption_(figure_caption) {}

    void node(const dom::DomNode& n)
    {
        switch (n.kind) {
        case dom::NodeKind::text: text(n.text); return;
        case dom::NodeKind::comment: return;
        case dom::NodeKind::document: children(n); return;
        case dom::NodeKind::element: break;
        }
        switch (dom::classify(n.tag)) {
        case dom::NodeClass::skip:
        case dom::NodeClass::void_:
            return;
        case dom::NodeClass::image:
            image(n);
            return;
        case dom::NodeClass::format_inline:
            if (n.tag == "br") {
                line_break();
            } else {
                formatted(n);
            }
            return;
        case dom::NodeClass::block:
            // Only reached for content flattened into a single segment (table cells).
            gap();
            children(n);
            gap();
            return;
        case dom::NodeClass::inline_:
            if (n.tag == "a") {
                ++anchor_depth_;
                children(n);
                --anchor_depth_;
            } else {
                children(n);
            }
            return;
        }
    }

    void children(const dom::DomNode& n)
    {
        const bool pre = n.is_element("pre");
        pre_depth_ += pre ? 1 : 0;
        for (const auto& c : n.children) {
            node(c);
        }
        pre_depth_ -= pre ? 1 : 0;
    }

    void enter_pre() { ++pre_depth_; }

    std::string finish()
    {
        // trailing <br> carries nothing
        while (out_.ends_with("<br>")) {
            out_.resize(out_.size() - 4);
        }
        return std::move(out_);
    }

private:
    void gap()
    {
        ++gaps_;
        pending_ = visible_ > 0;
    }

    void flush()
    {
        if (pending_) {
            out_ += ' ';
            pending_ = false;
        }
    }

    void text(std::string_view s)
    {
        std::size_t pos = 0;
        while (pos < s.size()) {
            const char c = s[pos];
            if (utf8::is_space(c)) {
                if (pre_depth_ > 0 && anchor_depth_ == 0) {
                    if (c == '\n') {
                        pre_space_.clear();
                        line_break();
                    } else if (c != '\r') {
                        pre_space_ += c == '\t' ? '\t' : ' ';
                    }
                } else {
                    gap();
                }
                ++pos;
                continue;
            }
            flush();
            if (!pre_space_.empty()) {
                // indentation inside <pre> survives; leading space of the block does not
                if (visible_ > 0) {
                    out_ += pre_space_;
                }
                pre_space_.clear();
            }
            const std::size_t begin = pos;
            utf8::next(s, pos);
            out_ += entities::escape_text(s.substr(begin, pos - begin));
            ++visible_;
        }
    }

    void line_break()
    {
        ++gaps_;
        pending_ = false;
        if (visible_ > 0 && anchor_depth_ == 0) {
            out_ += "<br>";
        }
    }

    void formatted(const dom::DomNode& n)
    {
        if (anchor_depth_ > 0) {
            children(n);
            return;
        }
        const std::size_t mark = out_.size();
        const bool was_pending = pending_;
        const std::size_t visible_before = visible_;
        const std::size_t gaps_before = gaps_;
        flush();
        out_ += "<" + n.tag + ">";
        children(n);
        if (visible_ == visible_before) {
            out_.resize(mark);
            pending_ = was_pending || (gaps_ != gaps_before && visible_ > 0);
            return;
        }
        out_ += "</" + n.tag + ">";
    }

    void image(const dom::DomNode& img)
    {
        if (anchor_depth_ > 0) {
            return;
        }
        std::string caption;
        for (const char* key : {"alt", "", "title"}) {
            if (*key == '\0') {
                caption = std::string(figure_caption_);
            } else if (const auto* v = img.attr(key)) {
                caption = dom::collapse_whitespace(*v);
            }
            if (!caption.empty()) {
                break;
            }
        }
        if (auto formatted = format_image(img, caption)) {
            flush();
            out_ += *formatted;
            ++visible_;
        }
    }

    std::string_view figure_caption_;
    std::string out_;
    bool pending_ = false;
    std::size_t visible_ = 0;
    std::size_t gaps_ = 0;
    int anchor_depth_ = 0;
    int pre_depth_ = 0;
    std::string pre_space_;
};

}  // namespace detail

/// Inline content of a block's non-block children: formatting tags (b, i,
/// em, code, br, …) kept, links reduced to their anchor text, other inline
/// tags stripped, whitespace collapsed.
inline std::string normalize_inline(std::span<const dom::DomNode> nodes)
{
    detail::InlineWriter w;
    for (const auto& n : nodes) {
        w.node(n);
    }
    return w.finish();
}

namespace detail {

class Segmenter {
public:
    explicit Segmenter(const dom::DomNode& doc) { mark_block_holders(doc); }

    struct Draft {
        std::string tag;
        std::string inner;
        bool wrapped = false;
    };

    std::vector<Draft> root(const dom::DomNode& start)
    {
        std::vector<Draft> out;
        for_each_item(start, [&](const Item& item) {
            if (item.block != nullptr) {
                append(out, block(*item.block, {}));
            } else {
                emit_run(out, "p", item.run, {}, false);
            }
        });
        return out;
    }

private:
    // Either a child block element or a run of inline nodes between blocks.
    struct Item {
        const dom::DomNode* block = nullptr;
        std::vector<const dom::DomNode*> run;
    };

    bool is_block(const dom::DomNode& n) const
    {
        return n.is_element() && dom::classify(n.tag) == dom::NodeClass::block;
    }

    bool holds_block(const dom::DomNode& n) const { return block_holders_.contains(&n); }

    bool mark_block_holders(const dom::DomNode& n)
    {
        bool any = false;
        for (const auto& c : n.children) {
            // evaluate every child so nested holders get marked too
            any = mark_block_holders(c) || any;
        }
        if (any) {
            block_holders_.insert(&n);
        }
        return any || is_block(n);
    }

    // Inline wrappers around block content are dissolved: their children are
    // visited as if they belonged to the enclosing block.
    void flatten(const dom::DomNode& parent, std::vector<Item>& items) const
    {
        for (const auto& c : parent.children) {
            if (is_block(c)) {
                items.push_back(Item{&c, {}});
            } else if (c.is_element() && holds_block(c)) {
                flatten(c, items);
            } else {
                if (items.empty() || items.back().block != nullptr) {
                    items.push_back(Item{});
                }
                items.back().run.push_back(&c);
            }
        }
    }

    template <typename F>
    void for_each_item(const dom::DomNode& parent, F&& f) const
    {
        std::vector<Item> items;
        flatten(parent, items);
        for (const auto& item : items) {
            f(item);
        }
    }

    static void append(std::vector<Draft>& out, std::vector<Draft>&& more)
    {
        for (auto& d : more) {
            out.push_back(std::move(d));
        }
    }

    static std::string render_run(const std::vector<const dom::DomNode*>& run, std::string_view caption,
                                  bool pre)
    {
        InlineWriter w(caption);
        if (pre) {
            w.enter_pre();
        }
        for (const auto* n : run) {
            w.node(*n);
        }
        return w.finish();
    }

    static bool emit_run(std::vector<Draft>& out, const std::string& tag,
                         const std::vector<const dom::DomNode*>& run, std::string_view caption, bool pre)
    {
        std::string html = render_run(run, caption, pre);
        if (html.empty()) {
            return false;
        }
        out.push_back(Draft{tag, std::move(html), false});
        return true;
    }

    static std::string figure_caption(const dom::DomNode& figure)
    {
        for (const auto& c : figure.children) {
            if (c.is_element("figcaption")) {
                return dom::visible_text(c);
            }
        }
        return {};
    }

    // A row whose cells hold paragraphs, headings or lists is page layout,
    // not data; it is segmented like any other container.
    bool layout_row(const dom::DomNode& tr) const
    {
        for (const auto& c : tr.children) {
            if ((c.is_element("td") || c.is_element("th")) && holds_block(c)) {
                return true;
            }
        }
        return false;
    }

    std::vector<Draft> row(const dom::DomNode& tr) const
    {
        std::vector<std::string> cells;
        bool any = false;
        std::vector<const dom::DomNode*> stray;
        auto flush_stray = [&] {
            if (!stray.empty()) {
                std::string html = render_run(stray, {}, false);
                if (!html.empty()) {
                    cells.push_back(std::move(html));
                    any = true;
                }
                stray.clear();
            }
        };
        for (const auto& c : tr.children) {
            if (c.is_element("td") || c.is_element("th")) {
                flush_stray();
                InlineWriter w;
                w.children(c);
                cells.push_back(w.finish());
                any = any || !cells.back().empty();
            } else {
                stray.push_back(&c);
            }
        }
        flush_stray();
        if (!any) {
            return {};
        }
        std::string joined;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k > 0) {
                joined += " | ";
            }
            joined += cells[k];
        }
        return {Draft{"tr", std::move(joined), false}};
    }

    std::vector<Draft> block(const dom::DomNode& el, std::string caption) const
    {
        if (el.tag == "tr" && !layout_row(el)) {
            return row(el);
        }
        if (el.tag == "figure") {
            caption = figure_caption(el);
        }
        const bool pre = el.tag == "pre";
        std::vector<Item> items;
        flatten(el, items);

        // Render every inline run once up front; rule selection depends on
        // whether any of them carries content.
        std::vector<std::string> runs(items.size());
        bool has_text = false;
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (items[k].block == nullptr) {
                runs[k] = render_run(items[k].run, caption, pre);
                has_text = has_text || !runs[k].empty();
            }
        }

        const bool transparent = el.tag == "thead" || el.tag == "tbody";
        std::vector<Draft> out;
        if (has_text || transparent) {
            for (std::size_t k = 0; k < items.size(); ++k) {
                if (items[k].block != nullptr) {
                    append(out, block(*items[k].block, caption));
                } else if (!runs[k].empty()) {
                    out.push_back(Draft{el.tag, std::move(runs[k]), false});
                }
            }
            return out;
        }
        for (const auto& item : items) {
            if (item.block != nullptr) {
                append(out, block(*item.block, caption));
            }
        }
        // No direct text: the element wraps its first child segment, one level deep.
        if (!out.empty() && !out.front().wrapped) {
            Draft& first = out.front();
            first.inner = "<" + first.tag + ">" + first.inner + "</" + first.tag + ">";
            first.tag = el.tag;
            first.wrapped = true;
        }
        return out;
    }

    std::unordered_set<const dom::DomNode*> block_holders_;
};

inline const dom::DomNode* find_body(const dom::DomNode& n)
{
    return dom::find_first(n, "body");
}

}  // namespace detail

/// Turns a cleaned document into numbered content blocks. Traversal is a DFS
/// from <body> (or from the document root when there is none). Salvaged
/// script text is appended as trailing <p> blocks; oversized blocks are split.
inline BlockSequence segment(const dom::DomNode& doc, const SegmenterConfig& cfg,
                             std::span<const std::string> salvage = {})
{
    cfg.validate();
    BlockSequence seq;
    const dom::DomNode* body = detail::find_body(doc);
    detail::Segmenter seg(doc);
    auto drafts = seg.root(body != nullptr ? *body : doc);
    for (const auto& s : salvage) {
        std::string text = dom::collapse_whitespace(s);
        if (!text.empty()) {
            drafts.push_back({"p", entities::escape_text(text), false});
        }
    }

    int next_split_id = 1;
    for (auto& d : drafts) {
        ContentBlock b;
        b.tag = std::move(d.tag);
        b.inner_html = std::move(d.inner);
        if (markup::visible_length(b.inner_html) > cfg.max_block_chars) {
            for (auto& frag : split_block(b, cfg, next_split_id++)) {
                seq.blocks.push_back(std::move(frag));
            }
        } else {
            seq.blocks.push_back(std::move(b));
        }
    }
    for (std::size_t k = 0; k < seq.blocks.size(); ++k) {
        seq.blocks[k].index = k + 1;
    }
    return seq;
}

}  // namespace webidx
