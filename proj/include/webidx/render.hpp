#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webidx/assembler.hpp"
#include "webidx/dom/node.hpp"
#include "webidx/dom/parser.hpp"
#include "webidx/dom/utf8.hpp"

namespace webidx {

enum class OutputFormat : std::uint8_t { html, markdown, text };

inline std::optional<OutputFormat> parse_format(std::string_view s)
{
    if (s == "html") {
        return OutputFormat::html;
    }
    if (s == "markdown" || s == "md") {
        return OutputFormat::markdown;
    }
    if (s == "text" || s == "txt") {
        return OutputFormat::text;
    }
    return std::nullopt;
}

inline std::string_view format_name(OutputFormat f)
{
    switch (f) {
    case OutputFormat::html: return "html";
    case OutputFormat::markdown: return "markdown";
    case OutputFormat::text: return "text";
    }
    return "html";
}

namespace detail {

class TextRenderer {
public:
    explicit TextRenderer(bool markdown) : md_(markdown) {}

    std::string document(const dom::DomNode& root)
    {
        const dom::DomNode* body = dom::find_first(root, "body");
        std::vector<std::string> blocks;
        container(body != nullptr ? *body : root, blocks);
        std::string out;
        for (const auto& b : blocks) {
            if (b.empty()) {
                continue;
            }
            if (!out.empty()) {
                out += "\n\n";
            }
            out += b;
        }
        return out;
    }

private:
    static bool is_block(const dom::DomNode& n)
    {
        return n.is_element()
               && (dom::classify(n.tag) == dom::NodeClass::block || n.tag == "body" || n.tag == "html");
    }

    // Children of a block container: inline runs become paragraphs, child
    // blocks render on their own.
    void container(const dom::DomNode& node, std::vector<std::string>& blocks)
    {
        std::vector<const dom::DomNode*> run;
        auto flush = [&] {
            if (!run.empty()) {
                blocks.push_back(inline_run(run));
                run.clear();
            }
        };
        for (const auto& c : node.children) {
            if (is_block(c)) {
                flush();
                block(c, blocks);
            } else {
                run.push_back(&c);
            }
        }
        flush();
    }

    void block(const dom::DomNode& n, std::vector<std::string>& blocks)
    {
        const std::string& tag = n.tag;
        if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') {
            std::string text = inline_of(n);
            if (!text.empty()) {
                blocks.push_back(md_ ? std::string(static_cast<std::size_t>(tag[1] - '0'), '#') + " " + text
                                     : text);
            }
        } else if (tag == "ul" || tag == "ol") {
            std::vector<std::string> lines;
            list(n, 0, lines);
            blocks.push_back(join(lines, "\n"));
        } else if (tag == "li") {
            std::vector<std::string> lines;
            item(n, md_ ? "- " : "", 0, lines);
            blocks.push_back(join(lines, "\n"));
        } else if (tag == "table" || tag == "thead" || tag == "tbody") {
            std::vector<const dom::DomNode*> rows;
            collect_rows(n, rows);
            if (rows.empty()) {
                container(n, blocks);
            } else {
                blocks.push_back(table(rows));
            }
        } else if (tag == "tr" && !layout_row(n)) {
            blocks.push_back(table({&n}));
        } else if (tag == "pre") {
            std::string body = preformatted(n);
            blocks.push_back(md_ ? "```\n" + body + "\n```" : body);
        } else if (tag == "blockquote") {
            std::vector<std::string> inner;
            container(n, inner);
            std::string joined = join_nonempty(inner, "\n\n");
            blocks.push_back(md_ ? prefix_lines(joined, "> ") : joined);
        } else {
            container(n, blocks);
        }
    }

    void list(const dom::DomNode& n, int depth, std::vector<std::string>& lines)
    {
        int number = 1;
        const bool ordered = n.tag == "ol";
        for (const auto& c : n.children) {
            if (c.is_element("li")) {
                std::string marker;
                if (md_) {
                    marker = ordered ? std::to_string(number) + ". " : "- ";
                }
                ++number;
                item(c, marker, depth, lines);
            } else if (c.is_element("ul") || c.is_element("ol")) {
                list(c, depth + 1, lines);
            } else if (!c.is_element() || !is_block(c)) {
                std::string text = inline_run({&c});
                if (!text.empty()) {
                    lines.push_back(indent(depth) + text);
                }
            }
        }
    }

    void item(const dom::DomNode& li, const std::string& marker, int depth, std::vector<std::string>& lines)
    {
        std::vector<const dom::DomNode*> run;
        std::string head;
        bool head_done = false;
        std::vector<std::string> tail;
        auto flush = [&] {
            if (run.empty()) {
                return;
            }
            std::string text = inline_run(run);
            run.clear();
            if (text.empty()) {
                return;
            }
            if (!head_done) {
                head = text;
                head_done = true;
            } else {
                tail.push_back(indent(depth + 1) + text);
            }
        };
        for (const auto& c : li.children) {
            if (c.is_element("ul") || c.is_element("ol")) {
                flush();
                head_done = true;
                list(c, depth + 1, tail);
            } else if (is_block(c)) {
                flush();
                std::vector<std::string> sub;
                block(c, sub);
                for (auto& s : sub) {
                    if (s.empty()) {
                        continue;
                    }
                    if (!head_done) {
                        head = s;
                        head_done = true;
                    } else {
                        tail.push_back(prefix_lines(s, indent(depth + 1)));
                    }
                }
            } else {
                run.push_back(&c);
            }
        }
        flush();
        if (!head.empty() || !tail.empty()) {
            lines.push_back(indent(depth) + marker + head);
        }
        for (auto& t : tail) {
            lines.push_back(std::move(t));
        }
    }

    // Rows that only carry page layout: a lone cell, or cells holding blocks.
    static bool layout_row(const dom::DomNode& tr)
    {
        std::size_t cells = 0;
        for (const auto& cell : tr.children) {
            if (!cell.is_element("td") && !cell.is_element("th")) {
                continue;
            }
            ++cells;
            for (const auto& c : cell.children) {
                if (is_block(c)) {
                    return true;
                }
            }
        }
        return cells == 1;
    }

    static void collect_rows(const dom::DomNode& n, std::vector<const dom::DomNode*>& rows)
    {
        for (const auto& c : n.children) {
            if (c.is_element("tr")) {
                rows.push_back(&c);
            } else if (c.is_element("thead") || c.is_element("tbody") || c.is_element("tfoot")) {
                collect_rows(c, rows);
            }
        }
    }

    std::string table(const std::vector<const dom::DomNode*>& rows)
    {
        std::vector<std::string> lines;
        for (const auto* tr : rows) {
            std::vector<std::string> cells;
            bool has_cells = false;
            for (const auto& c : tr->children) {
                if (c.is_element("td") || c.is_element("th")) {
                    has_cells = true;
                    cells.push_back(single_line(inline_of(c)));
                }
            }
            std::string line;
            std::size_t count = 1;
            if (has_cells) {
                line = join(cells, " | ");
                count = cells.size();
            } else {
                line = single_line(inline_of(*tr));
                for (std::size_t p = line.find(" | "); p != std::string::npos; p = line.find(" | ", p + 3)) {
                    ++count;
                }
            }
            if (line.empty()) {
                continue;
            }
            if (!md_) {
                lines.push_back(line);
                continue;
            }
            lines.push_back("| " + line + " |");
            if (lines.size() == 1) {
                std::string sep = "|";
                for (std::size_t k = 0; k < count; ++k) {
                    sep += "-|";
                }
                lines.push_back(sep);
            }
        }
        return join(lines, "\n");
    }

    // Hard breaks inside a table cell would end the row.
    static std::string single_line(std::string s)
    {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.compare(i, 3, "  \n") == 0) {
                out += ' ';
                i += 2;
            } else if (s[i] == '\n') {
                out += ' ';
            } else {
                out += s[i];
            }
        }
        return out;
    }

    std::string preformatted(const dom::DomNode& n)
    {
        std::string out;
        pre_text(n, out);
        while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) {
            out.pop_back();
        }
        std::size_t lead = 0;
        while (lead < out.size() && out[lead] == '\n') {
            ++lead;
        }
        return out.substr(lead);
    }

    static void pre_text(const dom::DomNode& n, std::string& out)
    {
        for (const auto& c : n.children) {
            if (c.is_text()) {
                out += c.text;
            } else if (c.is_element("br")) {
                out += '\n';
            } else if (c.is_element()) {
                pre_text(c, out);
            }
        }
    }

    std::string inline_of(const dom::DomNode& n)
    {
        std::vector<const dom::DomNode*> run;
        for (const auto& c : n.children) {
            run.push_back(&c);
        }
        return inline_run(run);
    }

    std::string inline_run(const std::vector<const dom::DomNode*>& run)
    {
        std::string raw;
        for (const auto* n : run) {
            inline_node(*n, raw);
        }
        return tidy(raw);
    }

    // Whitespace collapse that keeps the hard breaks emitted for <br>.
    std::string tidy(std::string_view raw) const
    {
        std::string out;
        bool pending = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const char c = raw[i];
            if (c == '\x01') {  // hard break marker
                while (!out.empty() && out.back() == ' ') {
                    out.pop_back();
                }
                out += '\x01';
                pending = false;
                continue;
            }
            if (utf8::is_space(c)) {
                pending = !out.empty() && out.back() != '\x01';
                continue;
            }
            if (pending) {
                out += ' ';
                pending = false;
            }
            out += c;
        }
        while (!out.empty() && out.back() == '\x01') {
            out.pop_back();
        }
        std::size_t lead = 0;
        while (lead < out.size() && out[lead] == '\x01') {
            ++lead;
        }
        out.erase(0, lead);
        std::string result;
        for (char c : out) {
            if (c == '\x01') {
                result += md_ ? "  \n" : "\n";
            } else {
                result += c;
            }
        }
        return result;
    }

    std::string escape(std::string_view text) const
    {
        if (!md_) {
            return std::string(text);
        }
        std::string out;
        for (char c : text) {
            if (c == '\\' || c == '*' || c == '_' || c == '`') {
                out += '\\';
            }
            out += c;
        }
        return out;
    }

    void wrap(const dom::DomNode& n, std::string_view mark, std::string& out)
    {
        std::string inner;
        for (const auto& c : n.children) {
            inline_node(c, inner);
        }
        if (!md_) {
            out += inner;
            return;
        }
        // Keep surrounding whitespace outside the markers.
        const auto first = inner.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            out += inner;
            return;
        }
        const auto last = inner.find_last_not_of(" \t\r\n");
        out += inner.substr(0, first);
        out += mark;
        out += inner.substr(first, last - first + 1);
        out += mark;
        out += inner.substr(last + 1);
    }

    void inline_node(const dom::DomNode& n, std::string& out)
    {
        if (n.is_text()) {
            out += escape(n.text);
            return;
        }
        if (!n.is_element()) {
            return;
        }
        const std::string& tag = n.tag;
        if (tag == "br") {
            out += '\x01';
            return;
        }
        if (tag == "img") {
            if (md_) {
                const std::string* src = n.attr("src");
                const std::string* alt = n.attr("alt");
                if (src != nullptr) {
                    out += " ![" + (alt != nullptr ? *alt : std::string()) + "](" + *src + ") ";
                }
            }
            return;
        }
        if (tag == "b" || tag == "strong") {
            wrap(n, "**", out);
        } else if (tag == "i" || tag == "em") {
            wrap(n, "*", out);
        } else if (tag == "code") {
            if (md_) {
                std::string raw;
                pre_text(n, raw);
                out += "`" + dom::collapse_whitespace(raw) + "`";
            } else {
                for (const auto& c : n.children) {
                    inline_node(c, out);
                }
            }
        } else {
            const bool breaks = dom::classify(tag) == dom::NodeClass::block;
            if (breaks) {
                out += ' ';
            }
            for (const auto& c : n.children) {
                inline_node(c, out);
            }
            if (breaks) {
                out += ' ';
            }
        }
    }

    static std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

    static std::string join(const std::vector<std::string>& parts, std::string_view sep)
    {
        std::string out;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            if (k > 0) {
                out += sep;
            }
            out += parts[k];
        }
        return out;
    }

    static std::string join_nonempty(const std::vector<std::string>& parts, std::string_view sep)
    {
        std::string out;
        for (const auto& p : parts) {
            if (p.empty()) {
                continue;
            }
            if (!out.empty()) {
                out += sep;
            }
            out += p;
        }
        return out;
    }

    static std::string prefix_lines(std::string_view text, std::string_view prefix)
    {
        std::string out(prefix);
        for (char c : text) {
            out += c;
            if (c == '\n') {
                out += prefix;
            }
        }
        return out;
    }

    bool md_;
};

}  // namespace detail

inline std::string to_markdown(const AssembledDocument& doc)
{
    return detail::TextRenderer(true).document(dom::parse_html(doc.html));
}

inline std::string to_text(const AssembledDocument& doc)
{
    return detail::TextRenderer(false).document(dom::parse_html(doc.html));
}

inline std::string render(const AssembledDocument& doc, OutputFormat format)
{
    switch (format) {
    case OutputFormat::markdown: return to_markdown(doc);
    case OutputFormat::text: return to_text(doc);
    case OutputFormat::html: break;
    }
    return doc.html;
}

}  // namespace webidx
