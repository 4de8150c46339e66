#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mixhal {

std::string trim(std::string_view text);

// Collapses every run of whitespace (including newlines) to a single space.
std::string collapse_whitespace(std::string_view text);

std::string to_lower_ascii(std::string_view text);

// Canonical form used for entity lookups: trim + collapse whitespace + casefold.
std::string normalize_surface(std::string_view surface);

// Whitespace-insensitive canonical form used by golden comparisons.
std::string normalize_for_compare(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);

// Rule-based sentence splitter over terminal punctuation, guarding common
// abbreviations and single-letter initials.
std::vector<std::string> split_sentences(const std::string& text);

std::size_t word_count(std::string_view text);

// Truncates to at most max_words, preferring the last sentence boundary that
// fits; falls back to a hard word cut.
std::string truncate_words(const std::string& text, std::size_t max_words);

std::string replace_all(std::string text, std::string_view from, std::string_view to);

bool starts_with(std::string_view text, std::string_view prefix);
bool contains(std::string_view text, std::string_view needle);

}  // namespace mixhal
