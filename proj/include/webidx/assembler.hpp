#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "webidx/dom/node.hpp"
#include "webidx/dom/parser.hpp"
#include "webidx/error.hpp"
#include "webidx/interval_set.hpp"
#include "webidx/segmenter/block.hpp"

namespace webidx {

/// Blocks picked from one sequence, in their original order.
struct SelectedBlocks {
    std::vector<ContentBlock> blocks;
};

struct AssembledDocument {
    std::string html;
    std::size_t block_count = 0;
    std::string title;
};

/// Blocks whose index is in `iset`. A split group that is hit anywhere is
/// taken whole so it can be rejoined without losing text.
inline SelectedBlocks select(const BlockSequence& seq, const IntervalSet& iset)
{
    if (iset.max_member() > seq.size()) {
        throw IndexOutOfRange("index " + std::to_string(iset.max_member()) + " outside 1.."
                              + std::to_string(seq.size()));
    }
    std::vector<int> groups;
    for (const auto& b : seq.blocks) {
        if (b.split && iset.contains(b.index)) {
            groups.push_back(b.split->id);
        }
    }
    SelectedBlocks sel;
    for (const auto& b : seq.blocks) {
        const bool in_group = b.split && std::find(groups.begin(), groups.end(), b.split->id) != groups.end();
        if (in_group || iset.contains(b.index)) {
            sel.blocks.push_back(b);
        }
    }
    return sel;
}

/// Collapses every split group into one block holding the fragments joined in
/// split-part order. The joined block takes the place of the group's first
/// fragment.
inline SelectedBlocks rejoin_fragments(const SelectedBlocks& sel)
{
    std::map<int, std::vector<const ContentBlock*>> groups;
    for (const auto& b : sel.blocks) {
        if (b.split) {
            groups[b.split->id].push_back(&b);
        }
    }
    for (auto& [id, parts] : groups) {
        std::sort(parts.begin(), parts.end(),
                  [](const ContentBlock* a, const ContentBlock* b) { return a->split->part < b->split->part; });
        const int total = parts.front()->split->total;
        bool complete = static_cast<int>(parts.size()) == total;
        for (std::size_t k = 0; complete && k < parts.size(); ++k) {
            complete = parts[k]->split->part == static_cast<int>(k) + 1 && parts[k]->split->total == total;
        }
        if (!complete) {
            throw IncompleteSplitGroup("split group " + std::to_string(id) + " has "
                                       + std::to_string(parts.size()) + " of " + std::to_string(total)
                                       + " parts");
        }
    }
    SelectedBlocks out;
    std::vector<int> emitted;
    for (const auto& b : sel.blocks) {
        if (!b.split) {
            out.blocks.push_back(b);
            continue;
        }
        if (std::find(emitted.begin(), emitted.end(), b.split->id) != emitted.end()) {
            continue;
        }
        emitted.push_back(b.split->id);
        ContentBlock joined;
        joined.index = b.index;
        joined.tag = b.tag;
        for (const auto* part : groups[b.split->id]) {
            joined.index = std::min(joined.index, part->index);
            joined.inner_html += part->inner_html;
        }
        out.blocks.push_back(std::move(joined));
    }
    return out;
}

namespace detail {

inline dom::DomNode block_node(const ContentBlock& b)
{
    dom::DomNode el = dom::DomNode::element(b.tag);
    dom::DomNode parsed = dom::parse_html(b.inner_html, {.pseudo_images = true});
    el.children = std::move(parsed.children);
    return el;
}

// Item tags that a collapsed container gathers from the blocks after it.
inline std::vector<std::string_view> gathered_items(std::string_view container)
{
    if (container == "ul" || container == "ol") {
        return {"li"};
    }
    if (container == "table") {
        return {"tr"};
    }
    if (container == "dl") {
        return {"dt", "dd"};
    }
    return {};
}

inline bool has_tag(const std::vector<std::string_view>& tags, std::string_view tag)
{
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

// True for a container whose first element child is one of its item tags,
// e.g. <ul><li>…</li></ul>.
inline bool collapsed_container(const dom::DomNode& node, const std::vector<std::string_view>& items)
{
    if (items.empty()) {
        return false;
    }
    for (const auto& c : node.children) {
        if (c.is_element()) {
            return has_tag(items, c.tag);
        }
        if (c.is_text() && c.text.find_first_not_of(" \t\r\n") != std::string::npos) {
            return false;
        }
    }
    return false;
}

}  // namespace detail

/// Rebuilds flattened containers: a list, table or definition list block
/// that wraps its first item absorbs the run of item blocks following it.
/// Everything else passes through in order.
inline std::vector<dom::DomNode> reconstruct(const SelectedBlocks& sel)
{
    std::vector<dom::DomNode> out;
    std::size_t k = 0;
    while (k < sel.blocks.size()) {
        dom::DomNode node = detail::block_node(sel.blocks[k]);
        ++k;
        const auto items = detail::gathered_items(node.tag);
        if (detail::collapsed_container(node, items)) {
            while (k < sel.blocks.size() && detail::has_tag(items, sel.blocks[k].tag)) {
                node.children.push_back(detail::block_node(sel.blocks[k]));
                ++k;
            }
        }
        out.push_back(std::move(node));
    }
    return out;
}

namespace detail {

// `<img>image: SRC, caption: CAP</img>` back to <img src alt>.
inline void restore_images(dom::DomNode& node)
{
    for (auto& c : node.children) {
        restore_images(c);
    }
    if (!node.is_element("img") || !node.attrs.empty() || node.children.empty()) {
        return;
    }
    std::string text;
    for (const auto& c : node.children) {
        if (c.is_text()) {
            text += c.text;
        }
    }
    constexpr std::string_view kImage = "image: ";
    constexpr std::string_view kCaption = ", caption: ";
    const auto sep = text.find(kCaption);
    node.children.clear();
    if (text.starts_with(kImage) && sep != std::string::npos) {
        node.attrs.push_back({"src", text.substr(kImage.size(), sep - kImage.size())});
        node.attrs.push_back({"alt", text.substr(sep + kCaption.size())});
    }
}

}  // namespace detail

/// Standalone page: head with the original title, body with `nodes`.
inline AssembledDocument build_html(std::vector<dom::DomNode> nodes, std::string_view title)
{
    AssembledDocument doc;
    doc.title = std::string(title);
    doc.block_count = nodes.size();
    doc.html = "<html><head><title>" + entities::escape_text(title) + "</title></head><body>";
    for (auto& n : nodes) {
        detail::restore_images(n);
        dom::serialize(n, doc.html);
    }
    doc.html += "</body></html>";
    return doc;
}

/// select → rejoin → reconstruct → build_html.
inline AssembledDocument assemble(const BlockSequence& seq, const IntervalSet& iset)
{
    return build_html(reconstruct(rejoin_fragments(select(seq, iset))), seq.title);
}

}  // namespace webidx
