#include "mixhal/text_utils.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace mixhal {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Abbreviations that end with a period without ending a sentence.
const std::array<std::string_view, 18> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc",
    "e.g", "i.e", "u.s", "u.k", "no", "fig", "gen", "col",
};

bool is_abbreviation(std::string_view token) {
    std::string lowered = to_lower_ascii(token);
    for (auto abbrev : kAbbreviations) {
        if (lowered == abbrev) return true;
    }
    // Single-letter initials such as "J." in "J. Smith".
    if (lowered.size() == 1 && std::isalpha(static_cast<unsigned char>(lowered[0]))) {
        return true;
    }
    return false;
}

}  // namespace

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = false;
    for (char c : text) {
        if (is_space(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string normalize_surface(std::string_view surface) {
    return to_lower_ascii(collapse_whitespace(surface));
}

std::string normalize_for_compare(std::string_view text) {
    return collapse_whitespace(text);
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, pos - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = pos + 1;
    }
    return lines;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t sentence_start = 0;
    const std::size_t n = text.size();

    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;

        // Consume a run of terminal punctuation plus closing quotes/brackets.
        std::size_t end = i + 1;
        while (end < n && (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
                           text[end] == '"' || text[end] == '\'' || text[end] == ')'))
            ++end;

        bool at_end = end >= n;
        bool followed_by_space = !at_end && is_space(text[end]);
        if (!at_end && !followed_by_space) continue;

        if (c == '.') {
            // Token immediately before the period.
            std::size_t tok_end = i;
            std::size_t tok_begin = tok_end;
            while (tok_begin > sentence_start && !is_space(text[tok_begin - 1])) --tok_begin;
            std::string_view token(text.data() + tok_begin, tok_end - tok_begin);
            // Strip one trailing period chain inside the token ("U.S" stays).
            if (!token.empty() && is_abbreviation(token)) continue;
        }

        std::string sentence = trim(std::string_view(text).substr(sentence_start, end - sentence_start));
        if (!sentence.empty()) sentences.push_back(std::move(sentence));
        i = end;
        while (i < n && is_space(text[i])) ++i;
        sentence_start = i;
        if (i < n) --i;  // loop increment
    }

    if (sentence_start < n) {
        std::string tail = trim(std::string_view(text).substr(sentence_start));
        if (!tail.empty()) sentences.push_back(std::move(tail));
    }
    return sentences;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

std::string truncate_words(const std::string& text, std::size_t max_words) {
    if (word_count(text) <= max_words) return text;

    auto sentences = split_sentences(text);
    std::string kept;
    std::size_t words = 0;
    for (const auto& sentence : sentences) {
        std::size_t sentence_words = word_count(sentence);
        if (words + sentence_words > max_words) break;
        if (!kept.empty()) kept.push_back(' ');
        kept += sentence;
        words += sentence_words;
    }
    if (!kept.empty()) return kept;

    // No sentence boundary fits; hard cut after max_words words.
    std::string out;
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
            if (count > max_words) break;
        }
        out.push_back(c);
    }
    return trim(out);
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
    if (from.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

bool starts_with(std::string_view text, std::string_view prefix) {
    return text.size() >= prefix.size() && text.substr(0, prefix.size()) == prefix;
}

bool contains(std::string_view text, std::string_view needle) {
    return text.find(needle) != std::string_view::npos;
}

}  // namespace mixhal
