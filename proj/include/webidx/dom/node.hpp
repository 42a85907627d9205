#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webidx/dom/entities.hpp"

namespace webidx::dom {

enum class NodeKind : std::uint8_t { document, element, text, comment };

struct Attribute {
    std::string name;
    std::string value;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// One node of a parsed document. Children are owned by value, so copying a
/// node deep-copies its subtree.
struct DomNode {
    NodeKind kind = NodeKind::document;
    std::string tag;                ///< lowercase; elements only
    std::vector<Attribute> attrs;   ///< source order
    std::vector<DomNode> children;
    std::string text;               ///< text and comment nodes only

    static DomNode document() { return DomNode{}; }

    static DomNode element(std::string tag, std::vector<Attribute> attrs = {})
    {
        DomNode n;
        n.kind = NodeKind::element;
        n.tag = std::move(tag);
        n.attrs = std::move(attrs);
        return n;
    }

    static DomNode make_text(std::string text)
    {
        DomNode n;
        n.kind = NodeKind::text;
        n.text = std::move(text);
        return n;
    }

    static DomNode comment(std::string text)
    {
        DomNode n;
        n.kind = NodeKind::comment;
        n.text = std::move(text);
        return n;
    }

    bool is_element() const noexcept { return kind == NodeKind::element; }
    bool is_text() const noexcept { return kind == NodeKind::text; }
    bool is_element(std::string_view name) const noexcept { return is_element() && tag == name; }

    const std::string* attr(std::string_view name) const
    {
        for (const auto& a : attrs) {
            if (a.name == name) {
                return &a.value;
            }
        }
        return nullptr;
    }

    friend bool operator==(const DomNode&, const DomNode&) = default;
};

enum class NodeClass : std::uint8_t { block, inline_, format_inline, image, void_, skip };

namespace detail {

inline constexpr std::array<std::string_view, 31> kBlockTags{
    "article", "aside",  "blockquote", "dd",     "div",   "dl",      "dt",    "figcaption",
    "figure",  "footer", "h1",         "h2",     "h3",    "h4",      "h5",    "h6",
    "header",  "li",     "main",       "nav",    "ol",    "p",       "pre",   "section",
    "table",   "tbody",  "td",         "th",     "thead", "tr",      "ul"};

inline constexpr std::array<std::string_view, 10> kFormatTags{
    "b", "br", "code", "em", "i", "s", "strong", "sub", "sup", "u"};

inline constexpr std::array<std::string_view, 12> kSkipTags{
    "button", "canvas", "form", "head", "iframe", "input",
    "link",   "meta",   "script", "select", "style", "svg"};

inline constexpr std::array<std::string_view, 14> kVoidTags{
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta",
    "param", "source", "track", "wbr"};

template <std::size_t N>
constexpr bool contains(const std::array<std::string_view, N>& set, std::string_view tag)
{
    return std::find(set.begin(), set.end(), tag) != set.end();
}

}  // namespace detail

/// Fixed tag table. Unknown tags are inline.
inline NodeClass classify(std::string_view tag)
{
    if (detail::contains(detail::kBlockTags, tag)) {
        return NodeClass::block;
    }
    if (detail::contains(detail::kFormatTags, tag)) {
        return NodeClass::format_inline;
    }
    if (tag == "img") {
        return NodeClass::image;
    }
    if (detail::contains(detail::kSkipTags, tag)) {
        return NodeClass::skip;
    }
    if (detail::contains(detail::kVoidTags, tag)) {
        return NodeClass::void_;
    }
    return NodeClass::inline_;
}

/// Elements the tokenizer never gives children.
inline bool is_void_tag(std::string_view tag)
{
    return detail::contains(detail::kVoidTags, tag);
}

inline bool is_raw_text_tag(std::string_view tag)
{
    return tag == "script" || tag == "style";
}

inline void serialize(const DomNode& node, std::string& out, bool raw = false)
{
    switch (node.kind) {
    case NodeKind::text:
        out += raw ? node.text : entities::escape_text(node.text);
        return;
    case NodeKind::comment:
        out += "<!--";
        out += node.text;
        out += "-->";
        return;
    case NodeKind::document:
        for (const auto& c : node.children) {
            serialize(c, out);
        }
        return;
    case NodeKind::element:
        break;
    }
    out += '<';
    out += node.tag;
    for (const auto& a : node.attrs) {
        out += ' ';
        out += a.name;
        out += "=\"";
        out += entities::escape_attr(a.value);
        out += '"';
    }
    out += '>';
    if (is_void_tag(node.tag) && node.children.empty()) {
        return;
    }
    const bool child_raw = is_raw_text_tag(node.tag);
    for (const auto& c : node.children) {
        serialize(c, out, child_raw);
    }
    out += "</";
    out += node.tag;
    out += '>';
}

inline std::string to_html(const DomNode& node)
{
    std::string out;
    serialize(node, out);
    return out;
}

inline std::string inner_html(const DomNode& node)
{
    std::string out;
    for (const auto& c : node.children) {
        serialize(c, out, node.is_element() && is_raw_text_tag(node.tag));
    }
    return out;
}

/// Collapses runs of ASCII whitespace to one space and trims both ends.
inline std::string collapse_whitespace(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (char c : s) {
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

namespace detail {

inline void gather_text(const DomNode& node, std::string& out)
{
    if (node.is_text()) {
        out += node.text;
        return;
    }
    if (node.kind == NodeKind::comment) {
        return;
    }
    const bool breaks = node.is_element()
                        && (classify(node.tag) == NodeClass::block || node.tag == "br");
    if (breaks) {
        out += ' ';
    }
    for (const auto& c : node.children) {
        gather_text(c, out);
    }
    if (breaks) {
        out += ' ';
    }
}

}  // namespace detail

/// Text a reader would see, block boundaries turned into spaces, whitespace
/// collapsed. Script and style bodies are included if still present; run
/// `clean` first to exclude them.
inline std::string visible_text(const DomNode& node)
{
    std::string raw;
    detail::gather_text(node, raw);
    return collapse_whitespace(raw);
}

inline const DomNode* find_first(const DomNode& node, std::string_view tag)
{
    if (node.is_element(tag)) {
        return &node;
    }
    for (const auto& c : node.children) {
        if (const auto* hit = find_first(c, tag)) {
            return hit;
        }
    }
    return nullptr;
}

}  // namespace webidx::dom
