#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixhal/knowledge_store.hpp"
#include "mixhal/ner.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

// Correct-summary derivation. XEnt mode excises spans annotated as
// non-factual hallucinations and repairs whitespace; FactCollect mode passes
// records labeled correct and skips the rest (returns nullopt).
std::optional<std::string> derive_correct_summary(const SeedRecord& seed);

// Appositive insertion after the first mention: "<entity>, <description>,"
// with the trailing comma suppressed before punctuation or end of text.
BenchmarkRecord inject_factual(const std::string& summary, const EntityMention& entity,
                               const EntityKnowledge& knowledge);

// Seeded sampling of an unrelated description (string-inequality with the
// correct one); the rest matches inject_factual.
BenchmarkRecord inject_nonfactual(const std::string& summary, const EntityMention& entity,
                                  const std::vector<EntityKnowledge>& description_pool,
                                  const EntityKnowledge& correct, std::uint64_t rng_seed);

// Removes the injected appositive from a hallucinated record's summary.
// Returns the reconstructed correct summary; identity for clean records.
std::string strip_injection(const BenchmarkRecord& record);

struct BuildConfig {
    long target_factual = 0;
    long target_nonfactual = 0;
    long target_clean = 0;
    PoolMode kb_mode = PoolMode::llm;
    std::uint64_t rng_seed = 0;
    // Restrict wrong-description sampling to entities of the same NER type
    // when possible (falls back to the full pool).
    bool type_matched_nonfactual = false;
};

struct CategoryStats {
    long count = 0;
    double mean_document_words = 0.0;
    double mean_summary_words = 0.0;
    std::optional<double> mean_injected_words;
};

struct BuildStats {
    CategoryStats factual;
    CategoryStats nonfactual;
    CategoryStats clean;
    long total = 0;
    long seeds_skipped = 0;
    std::vector<std::string> warnings;
};

struct BuildResult {
    std::vector<BenchmarkRecord> records;
    BuildStats stats;
    KnowledgePool pool;
};

BuildResult build_benchmark(const std::vector<SeedRecord>& seeds, const BuildConfig& config,
                            KnowledgeStore& store, NerAdapter& ner, LlmGateway* gateway);

// Seed-format adapters.
std::vector<SeedRecord> seeds_from_jsonl(const std::filesystem::path& path, SeedSource format);
std::vector<SeedRecord> seeds_from_path(const std::filesystem::path& path, SeedSource format);

nlohmann::json to_json(const BuildStats& stats);

}  // namespace mixhal
