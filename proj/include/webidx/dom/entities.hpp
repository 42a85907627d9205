#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "webidx/dom/utf8.hpp"

namespace webidx::entities {

namespace detail {

struct Named {
    std::string_view name;
    char32_t cp;
};

// Sorted by name for binary search. Covers the entities that show up in
// practice on article pages; anything else is left as literal text.
inline constexpr std::array<Named, 110> kNamed{{
    {"AElig", 0xC6},   {"Aacute", 0xC1},  {"Agrave", 0xC0},  {"Auml", 0xC4},
    {"Ccedil", 0xC7},  {"Eacute", 0xC9},  {"Egrave", 0xC8},  {"Iacute", 0xCD},
    {"Ntilde", 0xD1},  {"Oacute", 0xD3},  {"Ouml", 0xD6},    {"Uacute", 0xDA},
    {"Uuml", 0xDC},    {"aacute", 0xE1},  {"acirc", 0xE2},   {"acute", 0xB4},
    {"aelig", 0xE6},   {"agrave", 0xE0},  {"alpha", 0x3B1},  {"amp", 0x26},
    {"apos", 0x27},    {"aring", 0xE5},   {"atilde", 0xE3},  {"auml", 0xE4},
    {"bdquo", 0x201E}, {"beta", 0x3B2},   {"brvbar", 0xA6},  {"bull", 0x2022},
    {"ccedil", 0xE7},  {"cedil", 0xB8},   {"cent", 0xA2},    {"copy", 0xA9},
    {"curren", 0xA4},  {"dagger", 0x2020}, {"darr", 0x2193}, {"deg", 0xB0},
    {"delta", 0x3B4},  {"divide", 0xF7},  {"eacute", 0xE9},  {"ecirc", 0xEA},
    {"egrave", 0xE8},  {"emsp", 0x2003},  {"ensp", 0x2002},  {"euml", 0xEB},
    {"euro", 0x20AC},  {"frac12", 0xBD},  {"frac14", 0xBC},  {"frac34", 0xBE},
    {"gamma", 0x3B3},  {"ge", 0x2265},    {"gt", 0x3E},      {"harr", 0x2194},
    {"hellip", 0x2026}, {"iacute", 0xED}, {"icirc", 0xEE},   {"iexcl", 0xA1},
    {"igrave", 0xEC},  {"infin", 0x221E}, {"iquest", 0xBF},  {"iuml", 0xEF},
    {"lambda", 0x3BB}, {"laquo", 0xAB},   {"larr", 0x2190},  {"ldquo", 0x201C},
    {"le", 0x2264},    {"lsaquo", 0x2039}, {"lsquo", 0x2018}, {"lt", 0x3C},
    {"macr", 0xAF},    {"mdash", 0x2014}, {"micro", 0xB5},   {"middot", 0xB7},
    {"mu", 0x3BC},     {"nbsp", 0xA0},    {"ndash", 0x2013}, {"ne", 0x2260},
    {"not", 0xAC},     {"ntilde", 0xF1},  {"oacute", 0xF3},  {"ocirc", 0xF4},
    {"ograve", 0xF2},  {"ordf", 0xAA},    {"ordm", 0xBA},    {"oslash", 0xF8},
    {"otilde", 0xF5},  {"ouml", 0xF6},    {"para", 0xB6},    {"permil", 0x2030},
    {"pi", 0x3C0},     {"plusmn", 0xB1},  {"pound", 0xA3},   {"quot", 0x22},
    {"raquo", 0xBB},   {"rarr", 0x2192},  {"rdquo", 0x201D}, {"reg", 0xAE},
    {"rsaquo", 0x203A}, {"rsquo", 0x2019}, {"sbquo", 0x201A}, {"sect", 0xA7},
    {"shy", 0xAD},     {"sigma", 0x3C3},  {"sup2", 0xB2},    {"szlig", 0xDF},
    {"thinsp", 0x2009}, {"times", 0xD7},  {"trade", 0x2122}, {"uacute", 0xFA},
    {"uarr", 0x2191},  {"uuml", 0xFC},
}};

inline constexpr bool sorted()
{
    for (std::size_t i = 1; i < kNamed.size(); ++i) {
        if (!(kNamed[i - 1].name < kNamed[i].name)) {
            return false;
        }
    }
    return true;
}

inline const Named* lookup(std::string_view name)
{
    auto it = std::lower_bound(kNamed.begin(), kNamed.end(), name,
                               [](const Named& n, std::string_view key) { return n.name < key; });
    if (it != kNamed.end() && it->name == name) {
        return &*it;
    }
    return nullptr;
}

static_assert(sorted(), "entity table must stay sorted");

}  // namespace detail

/// Tries to decode one character reference at `s[pos]` (which must be '&').
/// On success appends the decoded text, advances `pos` past the reference and
/// returns true.
inline bool decode_one(std::string_view s, std::size_t& pos, std::string& out)
{
    std::size_t i = pos + 1;
    if (i < s.size() && s[i] == '#') {
        ++i;
        bool hex = false;
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            hex = true;
            ++i;
        }
        const std::size_t digits_begin = i;
        char32_t cp = 0;
        while (i < s.size() && (hex ? std::isxdigit(static_cast<unsigned char>(s[i]))
                                    : std::isdigit(static_cast<unsigned char>(s[i])))) {
            const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
            const char32_t digit = c <= '9' ? static_cast<char32_t>(c - '0')
                                            : static_cast<char32_t>(c - 'a' + 10);
            if (cp <= 0x10FFFF) {
                cp = cp * (hex ? 16 : 10) + digit;
            }
            ++i;
        }
        if (i == digits_begin) {
            return false;
        }
        if (i < s.size() && s[i] == ';') {
            ++i;
        }
        utf8::append(out, cp == 0 ? char32_t{0xFFFD} : cp);
        pos = i;
        return true;
    }
    std::size_t end = i;
    while (end < s.size() && end - i < 10 && std::isalnum(static_cast<unsigned char>(s[end]))) {
        ++end;
    }
    if (end == i) {
        return false;
    }
    // Longest match first so "&notin;" is not read as "&not" + "in;".
    for (std::size_t len = end - i; len > 0; --len) {
        if (const auto* named = detail::lookup(s.substr(i, len))) {
            const bool has_semicolon = i + len < s.size() && s[i + len] == ';';
            if (!has_semicolon && len != end - i) {
                continue;
            }
            utf8::append(out, named->cp);
            pos = i + len + (has_semicolon ? 1 : 0);
            return true;
        }
    }
    return false;
}

inline std::string decode(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t pos = 0; pos < s.size();) {
        if (s[pos] == '&' && decode_one(s, pos, out)) {
            continue;
        }
        out += s[pos++];
    }
    return out;
}

inline std::string escape_text(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string escape_attr(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace webidx::entities
