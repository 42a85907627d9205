#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace webidx::utf8 {

inline constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

inline void append(std::string& out, char32_t cp)
{
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        out += kReplacement;
    } else if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

/// Length in bytes of the well-formed sequence starting at `pos`, or 0 if the
/// bytes there are not valid UTF-8.
inline std::size_t sequence_length(std::string_view s, std::size_t pos)
{
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) {
        return 1;
    }
    std::size_t len = 0;
    char32_t min = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        min = 0x10000;
    } else {
        return 0;
    }
    if (pos + len > s.size()) {
        return 0;
    }
    char32_t cp = lead & (0x7F >> len);
    for (std::size_t i = 1; i < len; ++i) {
        if ((byte(pos + i) & 0xC0) != 0x80) {
            return 0;
        }
        cp = (cp << 6) | (byte(pos + i) & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return 0;
    }
    return len;
}

/// Replaces every invalid byte sequence (and NUL) with U+FFFD.
inline std::string sanitize(std::string_view in)
{
    std::string out;
    out.reserve(in.size());
    std::size_t pos = 0;
    while (pos < in.size()) {
        if (in[pos] == '\0') {
            out += kReplacement;
            ++pos;
            continue;
        }
        const std::size_t len = sequence_length(in, pos);
        if (len == 0) {
            out += kReplacement;
            ++pos;
        } else {
            out.append(in.substr(pos, len));
            pos += len;
        }
    }
    return out;
}

/// Decodes one code point at `pos` and advances it. Assumes sanitized input;
/// stray bytes decode as U+FFFD.
inline char32_t next(std::string_view s, std::size_t& pos)
{
    const std::size_t len = sequence_length(s, pos);
    if (len == 0) {
        ++pos;
        return 0xFFFD;
    }
    char32_t cp = static_cast<unsigned char>(s[pos]);
    if (len > 1) {
        cp &= 0x7F >> len;
        for (std::size_t i = 1; i < len; ++i) {
            cp = (cp << 6) | (static_cast<unsigned char>(s[pos + i]) & 0x3F);
        }
    }
    pos += len;
    return cp;
}

inline std::size_t length(std::string_view s)
{
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < s.size(); ++n) {
        next(s, pos);
    }
    return n;
}

inline constexpr bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace webidx::utf8
