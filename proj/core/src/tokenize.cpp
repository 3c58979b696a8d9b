#include "factcheck/tokenize.hpp"

#include <cstdint>

namespace factcheck {

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Decodes one UTF-8 codepoint starting at `pos`; malformed bytes decode as
// themselves so tokenization never fails on dirty input.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(s[i]); };
    const std::uint8_t b0 = byte(pos);
    if (b0 < 0x80) return {b0, 1};

    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {b0, 1};
    }
    if (pos + len > s.size()) return {b0, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const std::uint8_t b = byte(pos + i);
        if ((b & 0xC0) != 0x80) return {b0, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

}  // namespace

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_ascii_space(text[begin])) ++begin;
    while (end > begin && is_ascii_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

bool is_punct_codepoint(char32_t cp) {
    if (cp < 0x80) {
        switch (cp) {
            case '!': case '"': case '#': case '%': case '&': case '\'':
            case '(': case ')': case '*': case ',': case '-': case '.':
            case '/': case ':': case ';': case '?': case '@': case '[':
            case '\\': case ']': case '_': case '{': case '}':
                return true;
            default:
                return false;
        }
    }
    switch (cp) {
        case 0x00A1:  // inverted exclamation
        case 0x00A7:  // section sign
        case 0x00AB:  // left guillemet
        case 0x00B6:  // pilcrow
        case 0x00B7:  // middle dot
        case 0x00BB:  // right guillemet
        case 0x00BF:  // inverted question
            return true;
        default:
            break;
    }
    // General Punctuation: dashes, curly quotes, ellipsis, daggers, primes.
    if (cp >= 0x2010 && cp <= 0x2027) return true;
    if (cp >= 0x2030 && cp <= 0x205E) return true;
    // Supplemental / CJK sentence punctuation.
    if (cp >= 0x2E00 && cp <= 0x2E7F) return true;
    if (cp == 0x3001 || cp == 0x3002) return true;
    return false;
}

std::string strip_edge_punctuation(std::string_view token) {
    // Codepoint boundaries, decoded once.
    std::vector<std::pair<std::size_t, char32_t>> cps;
    for (std::size_t i = 0; i < token.size();) {
        const auto [cp, len] = decode_utf8(token, i);
        cps.emplace_back(i, cp);
        i += len;
    }
    std::size_t first = 0;
    std::size_t last = cps.size();
    while (first < last && is_punct_codepoint(cps[first].second)) ++first;
    while (last > first && is_punct_codepoint(cps[last - 1].second)) --last;
    if (first >= last) return {};
    const std::size_t begin = cps[first].first;
    const std::size_t end = (last < cps.size()) ? cps[last].first : token.size();
    return std::string(token.substr(begin, end - begin));
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::string lowered = ascii_lower(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < lowered.size()) {
        while (i < lowered.size() && is_ascii_space(lowered[i])) ++i;
        std::size_t start = i;
        while (i < lowered.size() && !is_ascii_space(lowered[i])) ++i;
        if (i > start) {
            std::string token = strip_edge_punctuation(std::string_view(lowered).substr(start, i - start));
            if (!token.empty()) tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

}  // namespace factcheck
