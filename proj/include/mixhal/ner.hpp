#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mixhal/types.hpp"

namespace mixhal {

class NerAdapter {
public:
    virtual ~NerAdapter() = default;
    virtual std::vector<EntityMention> extract(const std::string& text) = 0;
};

// Pre-annotated spans keyed by exact text. Texts without an entry yield no
// mentions (or throw in strict mode).
class FixtureNer : public NerAdapter {
public:
    FixtureNer() = default;
    explicit FixtureNer(const std::filesystem::path& json_file, bool strict = false);

    void add(const std::string& text, std::vector<EntityMention> mentions);
    std::vector<EntityMention> extract(const std::string& text) override;

private:
    std::map<std::string, std::vector<EntityMention>> entries_;
    bool strict_ = false;
};

// Finds occurrences of a fixed surface list (word-boundary matches).
class LexiconNer : public NerAdapter {
public:
    LexiconNer() = default;
    explicit LexiconNer(std::vector<std::string> surfaces);
    static LexiconNer from_file(const std::filesystem::path& path);  // one surface per line

    std::vector<EntityMention> extract(const std::string& text) override;

private:
    std::vector<std::string> surfaces_;
};

// Capitalized-span heuristic for fully offline runs: maximal runs of
// capitalized tokens, skipping sentence-initial single words that continue in
// lowercase.
class HeuristicNer : public NerAdapter {
public:
    std::vector<EntityMention> extract(const std::string& text) override;
};

// Wraps an adapter call: verifies every mention's offsets against the text
// and returns mentions sorted by char_start. Adapter exceptions surface as
// ner-unavailable errors.
std::vector<EntityMention> extract_entities(const std::string& text, NerAdapter& ner);

// "heuristic" | "lexicon:<path>" | "fixture:<path>"
std::unique_ptr<NerAdapter> make_ner_adapter(const std::string& selector);

}  // namespace mixhal
