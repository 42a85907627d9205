#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "webidx/error.hpp"

namespace webidx {

enum class QueryMode { query_relevant, main_content };

struct Query {
    std::string text;
    QueryMode mode = QueryMode::main_content;

    /// An empty (or all-whitespace) query means main-content extraction.
    static Query from_text(std::string text)
    {
        const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
        return Query{std::move(text), blank ? QueryMode::main_content : QueryMode::query_relevant};
    }
};

inline constexpr std::string_view kDefaultSystemText =
    "You extract content from web pages by predicting the indices of the blocks to keep.";

inline constexpr std::string_view kQueryTemplate =
    R"(The web page below has been split into numbered blocks. Each line starts with the block index in square brackets, followed by the block's HTML.

Task: select every block that is relevant to the user's query.

Query: {query}
Page title: {title}
Page URL: {url}

Blocks:
{blocks}

Rules:
1. Select only blocks whose content helps answer the query, including headings and table rows needed to read the selected content.
2. Navigation menus, advertisements, cookie notices, footers and other boilerplate are never relevant.
3. Blocks that carry the same split-id are pieces of one element: select all of them or none.
4. Use only indices that appear in the blocks above.

Output format:
Reply with the selected indices as a list of closed intervals, merging consecutive indices, for example [[1,2],[5,5],[8,12]].
If no block is relevant, reply with NA.
Output nothing else.)";

inline constexpr std::string_view kMainContentTemplate =
    R"(The web page below has been split into numbered blocks. Each line starts with the block index in square brackets, followed by the block's HTML.

Task: select every block that belongs to the main content of the page: the article, post, documentation or product description a reader came for, with its title, headings, images with captions, lists and tables.

Page title: {title}
Page URL: {url}

Blocks:
{blocks}

Rules:
1. Navigation menus, advertisements, cookie notices, related-article lists, comments sections, footers and other boilerplate are not main content.
2. Blocks that carry the same split-id are pieces of one element: select all of them or none.
3. Use only indices that appear in the blocks above.

Output format:
Reply with the selected indices as a list of closed intervals, merging consecutive indices, for example [[1,2],[5,5],[8,12]].
If the page has no main content, reply with NA.
Output nothing else.)";

/// Prompt text with {query}, {title}, {url} and {blocks} placeholders.
/// Substitution is a single left-to-right pass, so placeholder-like text
/// inside the page content is never expanded.
class PromptTemplate {
public:
    PromptTemplate() = default;
    PromptTemplate(std::string user_template, std::string system_text = std::string(kDefaultSystemText))
        : system_text_(std::move(system_text)), user_template_(std::move(user_template))
    {}

    static PromptTemplate for_mode(QueryMode mode)
    {
        return PromptTemplate(std::string(mode == QueryMode::main_content ? kMainContentTemplate
                                                                           : kQueryTemplate));
    }

    static PromptTemplate load(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot read prompt template " + path);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return PromptTemplate(ss.str());
    }

    const std::string& system_text() const noexcept { return system_text_; }
    const std::string& user_template() const noexcept { return user_template_; }

    std::string render(const Query& query, std::string_view title, std::string_view url,
                       std::string_view chunk_lines) const
    {
        const std::array<std::pair<std::string_view, std::string_view>, 4> values{{
            {"{query}", query.text},
            {"{title}", title},
            {"{url}", url},
            {"{blocks}", chunk_lines},
        }};
        std::string out;
        out.reserve(user_template_.size() + chunk_lines.size());
        std::size_t pos = 0;
        while (pos < user_template_.size()) {
            bool replaced = false;
            if (user_template_[pos] == '{') {
                for (const auto& [key, value] : values) {
                    if (std::string_view(user_template_).substr(pos, key.size()) == key) {
                        out += value;
                        pos += key.size();
                        replaced = true;
                        break;
                    }
                }
            }
            if (!replaced) {
                out += user_template_[pos++];
            }
        }
        return out;
    }

private:
    std::string system_text_ = std::string(kDefaultSystemText);
    std::string user_template_ = std::string(kQueryTemplate);
};

}  // namespace webidx
