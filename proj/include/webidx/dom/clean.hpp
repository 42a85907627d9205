#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "webidx/dom/node.hpp"
#include "webidx/dom/parser.hpp"
#include "webidx/dom/utf8.hpp"

namespace webidx::dom {

struct CleanResult {
    DomNode tree;
    /// Visible text recovered from HTML strings inside scripts, document order.
    std::vector<std::string> salvage;
};

/// Text of the first <title> inside <head>, whitespace collapsed; empty if
/// either is missing.
inline std::string extract_title(const DomNode& doc)
{
    const DomNode* head = find_first(doc, "head");
    if (head == nullptr) {
        return {};
    }
    const DomNode* title = find_first(*head, "title");
    if (title == nullptr) {
        return {};
    }
    std::string text;
    for (const auto& c : title->children) {
        if (c.is_text()) {
            text += c.text;
        }
    }
    return collapse_whitespace(text);
}

namespace detail {

/// Undoes JavaScript string-literal escaping so markup written as
/// "<p class=\"x\">" or "<p>" becomes scannable.
inline std::string unescape_script(std::string_view s)
{
    auto hex_value = [](std::string_view digits, char32_t& out) {
        out = 0;
        for (char c : digits) {
            if (!std::isxdigit(static_cast<unsigned char>(c))) {
                return false;
            }
            const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out = out * 16 + static_cast<char32_t>(l <= '9' ? l - '0' : l - 'a' + 10);
        }
        return true;
    };
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 >= s.size()) {
            out += s[i];
            continue;
        }
        const char e = s[++i];
        char32_t cp = 0;
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'u':
            if (i + 4 < s.size() && hex_value(s.substr(i + 1, 4), cp)) {
                utf8::append(out, cp);
                i += 4;
            } else {
                out += e;
            }
            break;
        case 'x':
            if (i + 2 < s.size() && hex_value(s.substr(i + 1, 2), cp)) {
                utf8::append(out, cp);
                i += 2;
            } else {
                out += e;
            }
            break;
        case '\n': break;
        default: out += e;  // \" \' \/ \\ and anything else
        }
    }
    return out;
}

/// Finds balanced `<tag …>…</tag>` regions in script text and returns the
/// visible text of each, skipping regions that contain only whitespace.
class FragmentScanner {
public:
    explicit FragmentScanner(std::string text) : s_(std::move(text)) {}

    std::vector<std::string> scan()
    {
        std::vector<std::string> found;
        std::size_t i = 0;
        while ((i = s_.find('<', i)) != std::string::npos) {
            const std::size_t end = match_at(i);
            if (end == std::string::npos) {
                ++i;
                continue;
            }
            std::string text = fragment_text(std::string_view(s_).substr(i, end - i));
            if (!text.empty()) {
                found.push_back(std::move(text));
            }
            i = end;
        }
        return found;
    }

private:
    struct Events {
        std::vector<std::size_t> opens;
        std::vector<std::pair<std::size_t, std::size_t>> closes;  // (start, one past '>')
    };

    static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

    // One past the end of the balanced region starting at `i`, or npos.
    std::size_t match_at(std::size_t i)
    {
        std::size_t j = i + 1;
        std::string name;
        while (j < s_.size() && name_char(s_[j])) {
            name += static_cast<char>(std::tolower(static_cast<unsigned char>(s_[j])));
            ++j;
        }
        if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])) || is_void_tag(name)
            || classify(name) == NodeClass::skip) {
            return std::string::npos;
        }
        if (j < s_.size() && !(utf8::is_space(s_[j]) || s_[j] == '>')) {
            return std::string::npos;
        }
        const std::size_t gt = s_.find_first_of("<>", j);
        if (gt == std::string::npos || s_[gt] != '>') {
            return std::string::npos;
        }
        const Events& ev = events(name);
        int depth = 1;
        auto open_it = std::upper_bound(ev.opens.begin(), ev.opens.end(), i);
        auto close_it = std::lower_bound(ev.closes.begin(), ev.closes.end(), std::make_pair(gt, std::size_t{0}));
        while (close_it != ev.closes.end()) {
            if (open_it != ev.opens.end() && *open_it < close_it->first) {
                ++depth;
                ++open_it;
                continue;
            }
            if (--depth == 0) {
                return close_it->second;
            }
            ++close_it;
        }
        return std::string::npos;
    }

    const Events& events(const std::string& name)
    {
        auto [it, inserted] = events_.try_emplace(name);
        if (!inserted) {
            return it->second;
        }
        Events& ev = it->second;
        const std::string open = "<" + name;
        const std::string close = "</" + name;
        for (std::size_t p = find_ci(s_, open, 0); p != std::string::npos; p = find_ci(s_, open, p + 1)) {
            const std::size_t after = p + open.size();
            if (after < s_.size() && !name_char(s_[after])) {
                ev.opens.push_back(p);
            }
        }
        for (std::size_t p = find_ci(s_, close, 0); p != std::string::npos; p = find_ci(s_, close, p + 1)) {
            const std::size_t after = p + close.size();
            if (after < s_.size() && !name_char(s_[after])) {
                const std::size_t gt = s_.find('>', after);
                if (gt != std::string::npos) {
                    ev.closes.emplace_back(p, gt + 1);
                }
            }
        }
        return ev;
    }

    static std::string fragment_text(std::string_view fragment);

    std::string s_;
    std::map<std::string, Events> events_;
};

inline bool drops_entirely(const DomNode& n)
{
    if (n.tag == "template") {
        return true;
    }
    return classify(n.tag) == NodeClass::skip && n.tag != "form";
}

// noscript and form are unwrapped: the wrapper goes, the content stays.
inline bool unwraps(const DomNode& n)
{
    return n.tag == "noscript" || n.tag == "form";
}

inline void clean_children(const DomNode& src, DomNode& dst)
{
    for (const auto& child : src.children) {
        switch (child.kind) {
        case NodeKind::comment:
        case NodeKind::document:
            break;
        case NodeKind::text:
            if (!dst.children.empty() && dst.children.back().is_text()) {
                dst.children.back().text += child.text;
            } else {
                dst.children.push_back(child);
            }
            break;
        case NodeKind::element:
            if (drops_entirely(child)) {
                break;
            }
            if (unwraps(child)) {
                clean_children(child, dst);
                break;
            }
            DomNode copy = DomNode::element(child.tag, child.attrs);
            clean_children(child, copy);
            dst.children.push_back(std::move(copy));
            break;
        }
    }
}

inline void collect_salvage(const DomNode& node, std::vector<std::string>& out)
{
    if (node.is_element("script")) {
        std::string body;
        for (const auto& c : node.children) {
            if (c.is_text()) {
                body += c.text;
            }
        }
        auto found = FragmentScanner(unescape_script(body)).scan();
        out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
        return;
    }
    if (node.is_element("template")) {
        return;
    }
    for (const auto& c : node.children) {
        collect_salvage(c, out);
    }
}

}  // namespace detail

/// Strips non-content nodes (scripts, styles, comments, head, templates and
/// every skip-class element), unwrapping noscript and form. Script bodies are
/// scanned for embedded markup first; the visible text found there is
/// returned as salvage.
inline CleanResult clean(const DomNode& doc)
{
    CleanResult result;
    detail::collect_salvage(doc, result.salvage);
    result.tree = DomNode::document();
    if (doc.is_element()) {
        result.tree = DomNode::element(doc.tag, doc.attrs);
    }
    detail::clean_children(doc, result.tree);
    return result;
}

inline std::string detail::FragmentScanner::fragment_text(std::string_view fragment)
{
    return visible_text(clean(parse_html(fragment)).tree);
}

}  // namespace webidx::dom
