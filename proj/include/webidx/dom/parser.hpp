#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "webidx/dom/entities.hpp"
#include "webidx/dom/node.hpp"
#include "webidx/dom/utf8.hpp"

namespace webidx::dom {

struct ParseOptions {
    /// Treat an attribute-less `<img>` as a container so the segmenter's
    /// `<img>image: …, caption: …</img>` notation survives a re-parse.
    bool pseudo_images = false;
};

namespace detail {

inline bool ascii_alpha(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline char lower(char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from)
{
    if (needle.size() > hay.size()) {
        return std::string_view::npos;
    }
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (lower(hay[i + j]) != needle[j]) {
                match = false;
                break;
            }
        }
        if (match) {
            return i;
        }
    }
    return std::string_view::npos;
}

template <std::size_t N>
bool one_of(std::string_view tag, const std::array<std::string_view, N>& set)
{
    return std::find(set.begin(), set.end(), tag) != set.end();
}

inline constexpr std::array<std::string_view, 38> kClosesParagraph{
    "address", "article", "aside",  "blockquote", "center", "details", "dialog", "dir",
    "div",     "dl",      "fieldset", "figcaption", "figure", "footer", "form",  "h1",
    "h2",      "h3",      "h4",     "h5",         "h6",     "header",  "hgroup", "hr",
    "main",    "menu",    "nav",    "ol",         "p",      "pre",     "section", "summary",
    "table",   "ul",      "li",     "dd",         "dt",     "xmp"};

inline constexpr std::array<std::string_view, 10> kScopeBoundary{
    "applet", "button", "caption", "html", "marquee", "object", "table", "td", "template", "th"};

// Deeper elements become leaves and their content lands in the parent, which
// keeps every recursive pass over the tree within stack limits.
inline constexpr std::size_t kMaxDepth = 512;

inline constexpr std::array<std::string_view, 6> kHeadings{"h1", "h2", "h3", "h4", "h5", "h6"};

/// Tolerant single-pass tokenizer and tree builder. It does not synthesize
/// html/head/body, and recovers from misnested markup with a small set of
/// implied-end-tag rules.
class TreeBuilder {
public:
    TreeBuilder(std::string_view input, ParseOptions options) : in_(input), options_(options)
    {
        stack_.push_back(&root_);
    }

    DomNode run()
    {
        while (pos_ < in_.size()) {
            if (in_[pos_] == '<' && try_markup()) {
                continue;
            }
            const std::size_t next = in_.find('<', pos_ + 1);
            const std::size_t end = next == std::string_view::npos ? in_.size() : next;
            append_text(entities::decode(in_.substr(pos_, end - pos_)));
            pos_ = end;
        }
        return std::move(root_);
    }

private:
    DomNode& top() { return *stack_.back(); }

    void append_text(std::string text)
    {
        if (text.empty()) {
            return;
        }
        auto& children = top().children;
        if (!children.empty() && children.back().is_text()) {
            children.back().text += text;
        } else {
            children.push_back(DomNode::make_text(std::move(text)));
        }
    }

    // Returns false if the '<' at pos_ is literal text.
    bool try_markup()
    {
        const std::string_view rest = in_.substr(pos_);
        if (rest.starts_with("<!--")) {
            const std::size_t close = in_.find("-->", pos_ + 4);
            const std::size_t end = close == std::string_view::npos ? in_.size() : close;
            top().children.push_back(DomNode::comment(std::string(in_.substr(pos_ + 4, end - pos_ - 4))));
            pos_ = close == std::string_view::npos ? in_.size() : close + 3;
            return true;
        }
        if (rest.size() > 1 && (rest[1] == '!' || rest[1] == '?')) {
            // doctype, CDATA, processing instruction: dropped
            const std::size_t close = in_.find('>', pos_);
            pos_ = close == std::string_view::npos ? in_.size() : close + 1;
            return true;
        }
        if (rest.size() > 2 && rest[1] == '/' && ascii_alpha(rest[2])) {
            std::size_t i = pos_ + 2;
            std::string name = read_name(i);
            const std::size_t close = in_.find('>', i);
            pos_ = close == std::string_view::npos ? in_.size() : close + 1;
            end_tag(name);
            return true;
        }
        if (rest.size() > 1 && ascii_alpha(rest[1])) {
            return start_tag();
        }
        return false;
    }

    std::string read_name(std::size_t& i)
    {
        std::string name;
        while (i < in_.size() && !utf8::is_space(in_[i]) && in_[i] != '/' && in_[i] != '>') {
            name += lower(in_[i]);
            ++i;
        }
        return name;
    }

    void skip_space(std::size_t& i)
    {
        while (i < in_.size() && utf8::is_space(in_[i])) {
            ++i;
        }
    }

    bool start_tag()
    {
        std::size_t i = pos_ + 1;
        std::string name = read_name(i);
        std::vector<Attribute> attrs;
        bool self_closing = false;
        for (;;) {
            skip_space(i);
            if (i >= in_.size()) {
                // Unterminated tag at EOF is dropped.
                pos_ = in_.size();
                return true;
            }
            if (in_[i] == '>') {
                ++i;
                break;
            }
            if (in_[i] == '/') {
                ++i;
                skip_space(i);
                if (i < in_.size() && in_[i] == '>') {
                    self_closing = true;
                    ++i;
                    break;
                }
                continue;
            }
            std::string attr_name;
            while (i < in_.size() && !utf8::is_space(in_[i]) && in_[i] != '>' && in_[i] != '='
                   && !(in_[i] == '/' && attr_name.size() > 0)) {
                attr_name += lower(in_[i]);
                ++i;
            }
            std::string value;
            skip_space(i);
            if (i < in_.size() && in_[i] == '=') {
                ++i;
                skip_space(i);
                if (i < in_.size() && (in_[i] == '"' || in_[i] == '\'')) {
                    const char quote = in_[i++];
                    const std::size_t close = in_.find(quote, i);
                    const std::size_t end = close == std::string_view::npos ? in_.size() : close;
                    value = entities::decode(in_.substr(i, end - i));
                    i = close == std::string_view::npos ? in_.size() : close + 1;
                } else {
                    const std::size_t begin = i;
                    while (i < in_.size() && !utf8::is_space(in_[i]) && in_[i] != '>') {
                        ++i;
                    }
                    value = entities::decode(in_.substr(begin, i - begin));
                }
            }
            if (attr_name.empty()) {
                ++i;
                continue;
            }
            const bool duplicate = std::any_of(attrs.begin(), attrs.end(),
                                               [&](const Attribute& a) { return a.name == attr_name; });
            if (!duplicate) {
                attrs.push_back({std::move(attr_name), std::move(value)});
            }
        }
        pos_ = i;
        open_element(std::move(name), std::move(attrs), self_closing);
        return true;
    }

    void open_element(std::string name, std::vector<Attribute> attrs, bool self_closing)
    {
        if ((name == "html" || name == "body" || name == "head") && is_open(name)) {
            return;
        }
        imply_end_tags(name);

        const bool pseudo_image = options_.pseudo_images && name == "img" && attrs.empty() && !self_closing;
        const bool leaf = self_closing || (is_void_tag(name) && !pseudo_image);
        top().children.push_back(DomNode::element(name, std::move(attrs)));
        DomNode* node = &top().children.back();
        if (leaf) {
            return;
        }
        if (is_raw_text_tag(name) || name == "title" || name == "textarea") {
            const std::string closer = "</" + name;
            const std::size_t close = find_ci(in_, closer, pos_);
            const std::size_t end = close == std::string_view::npos ? in_.size() : close;
            std::string body(in_.substr(pos_, end - pos_));
            if (!is_raw_text_tag(name)) {
                body = entities::decode(body);
            }
            if (!body.empty()) {
                node->children.push_back(DomNode::make_text(std::move(body)));
            }
            if (close == std::string_view::npos) {
                pos_ = in_.size();
            } else {
                const std::size_t gt = in_.find('>', close);
                pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
            }
            return;
        }
        if (stack_.size() < kMaxDepth) {
            stack_.push_back(node);
        }
    }

    bool is_open(std::string_view name) const
    {
        return std::any_of(stack_.begin() + 1, stack_.end(),
                           [&](const DomNode* n) { return n->tag == name; });
    }

    // Index into stack_ of the nearest open `targets` element, searching down
    // from the top and giving up at any `boundary` element.
    template <std::size_t N, std::size_t M>
    std::ptrdiff_t find_in_scope(const std::array<std::string_view, N>& targets,
                                 const std::array<std::string_view, M>& boundary) const
    {
        for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(stack_.size()) - 1; k > 0; --k) {
            const auto& tag = stack_[static_cast<std::size_t>(k)]->tag;
            if (one_of(tag, targets)) {
                return k;
            }
            if (one_of(tag, boundary)) {
                return -1;
            }
        }
        return -1;
    }

    void pop_to(std::ptrdiff_t k)
    {
        if (k > 0) {
            stack_.resize(static_cast<std::size_t>(k));
        }
    }

    void imply_end_tags(std::string_view name)
    {
        static constexpr std::array<std::string_view, 1> kP{"p"};
        static constexpr std::array<std::string_view, 1> kLi{"li"};
        static constexpr std::array<std::string_view, 2> kDtDd{"dt", "dd"};
        static constexpr std::array<std::string_view, 2> kCell{"td", "th"};
        static constexpr std::array<std::string_view, 1> kTr{"tr"};
        static constexpr std::array<std::string_view, 3> kSection{"thead", "tbody", "tfoot"};
        static constexpr std::array<std::string_view, 1> kOption{"option"};
        static constexpr std::array<std::string_view, 3> kListBoundary{"ul", "ol", "table"};
        static constexpr std::array<std::string_view, 2> kDlBoundary{"dl", "table"};
        static constexpr std::array<std::string_view, 2> kRowBoundary{"tr", "table"};
        static constexpr std::array<std::string_view, 4> kTableBoundary{"table", "thead", "tbody",
                                                                       "tfoot"};
        static constexpr std::array<std::string_view, 1> kTable{"table"};
        static constexpr std::array<std::string_view, 1> kSelect{"select"};

        if (one_of(name, kClosesParagraph)) {
            pop_to(find_in_scope(kP, kScopeBoundary));
        }
        if (name == "li") {
            pop_to(find_in_scope(kLi, kListBoundary));
        } else if (name == "dt" || name == "dd") {
            pop_to(find_in_scope(kDtDd, kDlBoundary));
        } else if (name == "td" || name == "th") {
            pop_to(find_in_scope(kCell, kRowBoundary));
        } else if (name == "tr") {
            pop_to(find_in_scope(kTr, kTableBoundary));
        } else if (one_of(name, kSection)) {
            pop_to(find_in_scope(kSection, kTable));
        } else if (name == "option") {
            pop_to(find_in_scope(kOption, kSelect));
        } else if (one_of(name, kHeadings) && one_of(top().tag, kHeadings)) {
            stack_.pop_back();
        }
        // A cell or row start closes any cell/row still open beneath the table.
        if (name == "tr" || one_of(name, kSection)) {
            for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(stack_.size()) - 1; k > 0; --k) {
                const auto& tag = stack_[static_cast<std::size_t>(k)]->tag;
                if (tag == "table" || one_of(tag, kSection)) {
                    break;
                }
                if (tag == "td" || tag == "th") {
                    pop_to(k);
                }
            }
        }
    }

    void end_tag(const std::string& name)
    {
        if (name == "body" || name == "html") {
            // Browsers keep trailing content inside body; so do we.
            return;
        }
        for (std::size_t k = stack_.size() - 1; k > 0; --k) {
            if (stack_[k]->tag == name) {
                stack_.resize(k);
                return;
            }
        }
    }

    std::string_view in_;
    ParseOptions options_;
    std::size_t pos_ = 0;
    DomNode root_ = DomNode::document();
    std::vector<DomNode*> stack_;
};

}  // namespace detail

/// Parses arbitrary text as HTML. Never fails: malformed markup yields a
/// best-effort tree and invalid UTF-8 is replaced with U+FFFD first.
inline DomNode parse_html(std::string_view html, ParseOptions options = {})
{
    const std::string clean = utf8::sanitize(html);
    return detail::TreeBuilder(clean, options).run();
}

}  // namespace webidx::dom
