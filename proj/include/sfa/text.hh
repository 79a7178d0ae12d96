/* text.hh -- small UTF-8 helpers shared by the predicate and regex parsers. */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hh"

namespace sfa::detail {

/// Decodes the codepoint starting at `i` and advances `i` past it.
inline std::uint32_t utf8_next(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) -> std::uint32_t {
        return static_cast<unsigned char>(s[k]);
    };
    const std::uint32_t b0 = byte(i);
    if (b0 < 0x80) {
        i += 1;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        if (k >= s.size() || (byte(k) & 0xC0u) != 0x80u)
            throw ParseError("invalid UTF-8 sequence", i);
        return byte(k) & 0x3Fu;
    };
    std::uint32_t cp;
    if ((b0 & 0xE0u) == 0xC0u) {
        cp = ((b0 & 0x1Fu) << 6) | cont(i + 1);
        i += 2;
    } else if ((b0 & 0xF0u) == 0xE0u) {
        cp = ((b0 & 0x0Fu) << 12) | (cont(i + 1) << 6) | cont(i + 2);
        i += 3;
    } else if ((b0 & 0xF8u) == 0xF0u) {
        cp = ((b0 & 0x07u) << 18) | (cont(i + 1) << 12) | (cont(i + 2) << 6) | cont(i + 3);
        i += 4;
    } else {
        throw ParseError("invalid UTF-8 sequence", i);
    }
    return cp;
}

inline void utf8_append(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace sfa::detail
