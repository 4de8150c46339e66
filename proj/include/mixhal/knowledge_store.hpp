#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mixhal/llm_gateway.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

// Entity-description lookup against a knowledge base. Pluggable so tests can
// run on recorded fixtures.
class WikidataClient {
public:
    virtual ~WikidataClient() = default;
    // nullopt means "no entry for this label" (a miss, not an error).
    virtual std::optional<std::string> lookup_description(const std::string& surface) = 0;
};

// Recorded fixture client; keys are normalized surfaces.
class FixtureWikidataClient : public WikidataClient {
public:
    FixtureWikidataClient() = default;
    explicit FixtureWikidataClient(const std::filesystem::path& json_file);

    void add(const std::string& surface, const std::string& description);
    std::optional<std::string> lookup_description(const std::string& surface) override;

    std::size_t lookup_count() const { return lookup_count_; }

private:
    std::map<std::string, std::string> entries_;
    std::size_t lookup_count_ = 0;
};

// Live client using the entity-search API's short description field.
class HttpWikidataClient : public WikidataClient {
public:
    explicit HttpWikidataClient(std::string base_url = "https://www.wikidata.org");
    std::optional<std::string> lookup_description(const std::string& surface) override;

private:
    std::string base_url_;
};

enum class PoolMode { wikidata, llm, wikidata_then_llm };

std::optional<PoolMode> pool_mode_from_string(std::string_view text);
std::string to_string(PoolMode mode);

struct KnowledgePool {
    // Keyed by normalized entity surface; at most one entry per surface.
    std::map<std::string, EntityKnowledge> entries;
    std::vector<std::string> misses;  // normalized surfaces that resolved nowhere

    const EntityKnowledge* find(const std::string& surface) const;
    std::size_t size() const { return entries.size(); }
};

// Fetches, generates, caches, and persists one-sentence entity descriptions.
// Descriptions are canonicalized on ingestion: whitespace collapsed, capped at
// 80 words on a sentence boundary, and one trailing period stripped so the
// text drops cleanly into an appositive.
class KnowledgeStore {
public:
    explicit KnowledgeStore(std::shared_ptr<WikidataClient> client = nullptr,
                            std::optional<std::filesystem::path> cache_file = std::nullopt);

    std::optional<EntityKnowledge> fetch_wikidata_description(const EntityMention& entity);
    EntityKnowledge generate_llm_description(const EntityMention& entity, LlmGateway& gateway);

    KnowledgePool build_knowledge_pool(const std::vector<EntityMention>& entities, PoolMode mode,
                                       LlmGateway* gateway);

    static std::string normalize_description(const std::string& raw);

    std::size_t cache_size() const;

private:
    std::optional<EntityKnowledge> cached(const std::string& normalized, KnowledgeSource source) const;
    void remember(const EntityKnowledge& knowledge);

    std::shared_ptr<WikidataClient> client_;
    std::optional<std::filesystem::path> cache_file_;
    mutable std::mutex mutex_;
    // Keyed by (normalized surface, source).
    std::map<std::pair<std::string, KnowledgeSource>, EntityKnowledge> cache_;
};

}  // namespace mixhal
