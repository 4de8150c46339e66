#include "mixhal/ner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "mixhal/error.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

using nlohmann::json;

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'' || c == '-';
}

bool boundary_at(const std::string& text, std::size_t pos) {
    if (pos == 0 || pos >= text.size()) return true;
    return !is_word_char(text[pos - 1]) || !is_word_char(text[pos]);
}

}  // namespace

FixtureNer::FixtureNer(const std::filesystem::path& json_file, bool strict) : strict_(strict) {
    std::ifstream in(json_file);
    if (!in) throw MixhalError(ErrorKind::io, "cannot open NER fixture " + json_file.string());
    json data;
    try {
        data = json::parse(in);
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, "NER fixture: " + std::string(e.what()));
    }
    for (auto it = data.begin(); it != data.end(); ++it) {
        std::vector<EntityMention> mentions;
        for (const auto& row : it.value()) {
            EntityMention mention;
            mention.surface = row.at("surface").get<std::string>();
            mention.char_start = row.at("char_start").get<std::size_t>();
            mention.char_end = row.at("char_end").get<std::size_t>();
            mention.entity_type = row.value("entity_type", std::string{});
            mentions.push_back(std::move(mention));
        }
        entries_[it.key()] = std::move(mentions);
    }
}

void FixtureNer::add(const std::string& text, std::vector<EntityMention> mentions) {
    entries_[text] = std::move(mentions);
}

std::vector<EntityMention> FixtureNer::extract(const std::string& text) {
    auto it = entries_.find(text);
    if (it == entries_.end()) {
        if (strict_) throw MixhalError(ErrorKind::ner_unavailable, "no fixture annotation for text");
        return {};
    }
    return it->second;
}

LexiconNer::LexiconNer(std::vector<std::string> surfaces) : surfaces_(std::move(surfaces)) {
    // Longest-first so overlapping surfaces prefer the longer match.
    std::sort(surfaces_.begin(), surfaces_.end(),
              [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
}

LexiconNer LexiconNer::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MixhalError(ErrorKind::io, "cannot open lexicon " + path.string());
    std::vector<std::string> surfaces;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) surfaces.push_back(line);
    }
    return LexiconNer(std::move(surfaces));
}

std::vector<EntityMention> LexiconNer::extract(const std::string& text) {
    std::vector<EntityMention> mentions;
    std::vector<bool> claimed(text.size(), false);
    for (const auto& surface : surfaces_) {
        if (surface.empty()) continue;
        std::size_t pos = 0;
        while ((pos = text.find(surface, pos)) != std::string::npos) {
            std::size_t end = pos + surface.size();
            bool overlaps = false;
            for (std::size_t i = pos; i < end && !overlaps; ++i) overlaps = claimed[i];
            if (!overlaps && boundary_at(text, pos) && boundary_at(text, end)) {
                for (std::size_t i = pos; i < end; ++i) claimed[i] = true;
                mentions.push_back({surface, pos, end, "ENT"});
            }
            pos = end;
        }
    }
    std::sort(mentions.begin(), mentions.end(),
              [](const EntityMention& a, const EntityMention& b) { return a.char_start < b.char_start; });
    return mentions;
}

std::vector<EntityMention> HeuristicNer::extract(const std::string& text) {
    std::vector<EntityMention> mentions;
    const std::size_t n = text.size();
    std::size_t i = 0;
    bool sentence_start = true;

    auto is_cap_token_at = [&](std::size_t pos, std::size_t& token_end) {
        if (pos >= n || !std::isupper(static_cast<unsigned char>(text[pos]))) return false;
        std::size_t end = pos;
        while (end < n && is_word_char(text[end])) ++end;
        token_end = end;
        return true;
    };

    while (i < n) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') sentence_start = true;
        std::size_t token_end = 0;
        if (boundary_at(text, i) && is_cap_token_at(i, token_end)) {
            std::size_t span_start = i;
            std::size_t span_end = token_end;
            std::size_t tokens = 1;
            // Extend across following capitalized tokens separated by one space.
            while (span_end + 1 < n && text[span_end] == ' ') {
                std::size_t next_end = 0;
                if (!is_cap_token_at(span_end + 1, next_end)) break;
                span_end = next_end;
                ++tokens;
            }
            // A lone capitalized token at sentence start is usually just the
            // sentence opener, not an entity.
            if (!(tokens == 1 && sentence_start)) {
                mentions.push_back({text.substr(span_start, span_end - span_start),
                                    span_start, span_end, "ENT"});
            }
            sentence_start = false;
            i = span_end;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '.' && c != '!' && c != '?')
            sentence_start = false;
        ++i;
    }
    return mentions;
}

std::vector<EntityMention> extract_entities(const std::string& text, NerAdapter& ner) {
    if (text.empty()) return {};
    std::vector<EntityMention> mentions;
    try {
        mentions = ner.extract(text);
    } catch (const MixhalError&) {
        throw;
    } catch (const std::exception& e) {
        throw MixhalError(ErrorKind::ner_unavailable, e.what());
    }

    for (const auto& mention : mentions) {
        if (mention.char_end <= mention.char_start || mention.char_end > text.size() ||
            text.compare(mention.char_start, mention.char_end - mention.char_start,
                         mention.surface) != 0) {
            throw MixhalError(ErrorKind::validation,
                              "mention offsets do not match text for surface '" + mention.surface + "'");
        }
    }
    std::sort(mentions.begin(), mentions.end(),
              [](const EntityMention& a, const EntityMention& b) { return a.char_start < b.char_start; });
    return mentions;
}

std::unique_ptr<NerAdapter> make_ner_adapter(const std::string& selector) {
    if (selector.empty() || selector == "heuristic") return std::make_unique<HeuristicNer>();
    if (starts_with(selector, "lexicon:")) {
        return std::make_unique<LexiconNer>(LexiconNer::from_file(selector.substr(8)));
    }
    if (starts_with(selector, "fixture:")) {
        return std::make_unique<FixtureNer>(selector.substr(8));
    }
    throw MixhalError(ErrorKind::config, "unknown NER adapter: " + selector);
}

}  // namespace mixhal
