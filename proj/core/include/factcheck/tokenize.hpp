#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace factcheck {

// ASCII-only case folding; bytes outside A-Z pass through untouched.
std::string ascii_lower(std::string_view text);

// Strips ASCII whitespace from both ends.
std::string trim(std::string_view text);

// True for Unicode punctuation (category P*): the ASCII punctuation subset,
// the Latin-1 punctuation marks, and the General Punctuation block. Symbols
// ($ + < = > ^ ` | ~) are not punctuation and are never stripped.
bool is_punct_codepoint(char32_t cp);

// Removes leading and trailing punctuation codepoints; interior characters
// (including hyphens, so "covid-19" survives) are untouched.
std::string strip_edge_punctuation(std::string_view token);

// Lowercase, split on ASCII whitespace, strip edge punctuation per token,
// drop tokens that end up empty.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace factcheck
