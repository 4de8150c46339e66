#include "mixhal/knowledge_store.hpp"

#include <ctime>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "mixhal/error.hpp"
#include "mixhal/jsonl.hpp"
#include "mixhal/prompt_templates.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

using nlohmann::json;

namespace {

std::string iso8601_now() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

}  // namespace

FixtureWikidataClient::FixtureWikidataClient(const std::filesystem::path& json_file) {
    std::ifstream in(json_file);
    if (!in) throw MixhalError(ErrorKind::io, "cannot open fixture " + json_file.string());
    json data;
    try {
        data = json::parse(in);
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, "fixture " + json_file.string() + ": " + e.what());
    }
    for (auto it = data.begin(); it != data.end(); ++it) {
        add(it.key(), it.value().get<std::string>());
    }
}

void FixtureWikidataClient::add(const std::string& surface, const std::string& description) {
    entries_[normalize_surface(surface)] = description;
}

std::optional<std::string> FixtureWikidataClient::lookup_description(const std::string& surface) {
    ++lookup_count_;
    auto it = entries_.find(normalize_surface(surface));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

HttpWikidataClient::HttpWikidataClient(std::string base_url) : base_url_(std::move(base_url)) {}

std::optional<std::string> HttpWikidataClient::lookup_description(const std::string& surface) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(30);
    client.set_read_timeout(30);

    httplib::Params params{
        {"action", "wbsearchentities"}, {"search", surface},   {"language", "en"},
        {"format", "json"},             {"limit", "1"},        {"type", "item"},
    };
    auto result = client.Get("/w/api.php", params, httplib::Headers{});
    if (!result) {
        throw MixhalError(ErrorKind::backend_unavailable,
                          "knowledge base lookup failed: " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
        throw MixhalError(ErrorKind::backend_unavailable,
                          "knowledge base lookup returned " + std::to_string(result->status));
    }
    try {
        json payload = json::parse(result->body);
        const auto& matches = payload.at("search");
        if (!matches.is_array() || matches.empty()) return std::nullopt;
        const auto& first = matches.at(0);
        if (!first.contains("description")) return std::nullopt;
        return first.at("description").get<std::string>();
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, std::string("malformed knowledge payload: ") + e.what());
    }
}

std::optional<PoolMode> pool_mode_from_string(std::string_view text) {
    if (text == "wikidata") return PoolMode::wikidata;
    if (text == "llm") return PoolMode::llm;
    if (text == "wikidata_then_llm") return PoolMode::wikidata_then_llm;
    return std::nullopt;
}

std::string to_string(PoolMode mode) {
    switch (mode) {
        case PoolMode::wikidata: return "wikidata";
        case PoolMode::llm: return "llm";
        case PoolMode::wikidata_then_llm: return "wikidata_then_llm";
    }
    return "llm";
}

const EntityKnowledge* KnowledgePool::find(const std::string& surface) const {
    auto it = entries.find(normalize_surface(surface));
    if (it == entries.end()) return nullptr;
    return &it->second;
}

KnowledgeStore::KnowledgeStore(std::shared_ptr<WikidataClient> client,
                               std::optional<std::filesystem::path> cache_file)
    : client_(std::move(client)), cache_file_(std::move(cache_file)) {
    if (!cache_file_) return;
    std::ifstream in(*cache_file_);
    if (!in) return;  // cache file created lazily on first write
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            EntityKnowledge knowledge = entity_knowledge_from_json(json::parse(line));
            cache_[{normalize_surface(knowledge.entity_surface), knowledge.source}] = knowledge;
        } catch (const std::exception&) {
            // Skip unreadable lines; the cache is advisory.
        }
    }
}

std::string KnowledgeStore::normalize_description(const std::string& raw) {
    std::string text = collapse_whitespace(raw);
    text = truncate_words(text, 80);
    if (!text.empty() && text.back() == '.') text.pop_back();
    return trim(text);
}

std::optional<EntityKnowledge> KnowledgeStore::cached(const std::string& normalized,
                                                      KnowledgeSource source) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find({normalized, source});
    if (it == cache_.end()) return std::nullopt;
    return it->second;
}

void KnowledgeStore::remember(const EntityKnowledge& knowledge) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(normalize_surface(knowledge.entity_surface), knowledge.source);
    if (cache_.count(key)) return;
    cache_[key] = knowledge;
    if (!cache_file_) return;
    std::ofstream out(*cache_file_, std::ios::app);
    if (out) out << to_json(knowledge).dump() << '\n';
}

std::size_t KnowledgeStore::cache_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

std::optional<EntityKnowledge> KnowledgeStore::fetch_wikidata_description(const EntityMention& entity) {
    if (entity.surface.empty()) throw MixhalError(ErrorKind::validation, "empty entity surface");
    const std::string normalized = normalize_surface(entity.surface);

    if (auto hit = cached(normalized, KnowledgeSource::wikidata)) return hit;
    if (!client_) throw MixhalError(ErrorKind::config, "no knowledge base client configured");

    auto description = client_->lookup_description(entity.surface);
    if (!description) return std::nullopt;

    EntityKnowledge knowledge;
    knowledge.entity_surface = entity.surface;
    knowledge.description = normalize_description(*description);
    knowledge.source = KnowledgeSource::wikidata;
    knowledge.retrieved_at = iso8601_now();
    if (knowledge.description.empty()) return std::nullopt;
    remember(knowledge);
    return knowledge;
}

EntityKnowledge KnowledgeStore::generate_llm_description(const EntityMention& entity,
                                                         LlmGateway& gateway) {
    if (entity.surface.empty()) throw MixhalError(ErrorKind::validation, "empty entity surface");
    const std::string normalized = normalize_surface(entity.surface);

    if (auto hit = cached(normalized, KnowledgeSource::llm_generated)) return *hit;

    PromptRequest request;
    request.user_text = prompts::render(prompts::knowledge_generation(), {{"entity", entity.surface}});
    request.max_tokens = 256;
    CompletionText completion = gateway.complete(request);

    std::string description = normalize_description(completion.text);
    if (description.empty()) {
        throw MixhalError(ErrorKind::generation,
                          "empty description generated for " + entity.surface);
    }

    EntityKnowledge knowledge;
    knowledge.entity_surface = entity.surface;
    knowledge.description = description;
    knowledge.source = KnowledgeSource::llm_generated;
    knowledge.retrieved_at = iso8601_now();
    remember(knowledge);
    return knowledge;
}

KnowledgePool KnowledgeStore::build_knowledge_pool(const std::vector<EntityMention>& entities,
                                                   PoolMode mode, LlmGateway* gateway) {
    if ((mode == PoolMode::llm || mode == PoolMode::wikidata_then_llm) && gateway == nullptr) {
        throw MixhalError(ErrorKind::config, "LLM knowledge mode requires a gateway");
    }

    // Deduplicate by normalized surface, keeping first-seen mention order.
    std::vector<EntityMention> unique;
    std::map<std::string, bool> seen;
    for (const auto& entity : entities) {
        std::string normalized = normalize_surface(entity.surface);
        if (normalized.empty() || seen.count(normalized)) continue;
        seen[normalized] = true;
        unique.push_back(entity);
    }

    KnowledgePool pool;
    for (const auto& entity : unique) {
        const std::string normalized = normalize_surface(entity.surface);
        std::optional<EntityKnowledge> knowledge;

        if (mode == PoolMode::wikidata || mode == PoolMode::wikidata_then_llm) {
            knowledge = fetch_wikidata_description(entity);
        }
        if (!knowledge && (mode == PoolMode::llm || mode == PoolMode::wikidata_then_llm)) {
            try {
                knowledge = generate_llm_description(entity, *gateway);
            } catch (const MixhalError& e) {
                if (e.kind() != ErrorKind::generation) throw;
                // fall through to miss accounting
            }
        }

        if (knowledge) {
            pool.entries[normalized] = *knowledge;
        } else {
            pool.misses.push_back(normalized);
        }
    }
    return pool;
}

}  // namespace mixhal
