#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixhal {

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

// Order matters: metrics index classes as [FH, NFH, NoH].
enum class SummaryLabel {
    factual_hallucination = 0,
    non_factual_hallucination = 1,
    no_hallucination = 2,
};

inline constexpr int kNumLabels = 3;

std::string to_string(SummaryLabel label);
std::optional<SummaryLabel> label_from_string(std::string_view text);

enum class JudgeMethod { vanilla, icl, cot, kr, cr, rr };

std::string to_string(JudgeMethod method);
std::optional<JudgeMethod> method_from_string(std::string_view text);

// ---------------------------------------------------------------------------
// Claims, queries, evidence
// ---------------------------------------------------------------------------

struct Claim {
    int index = 0;
    std::string text;
};

enum class QueryStage { initial, reflective };

struct Query {
    std::string text;
    int claim_index = 0;
    QueryStage stage = QueryStage::initial;
};

enum class ChunkKind { document, knowledge };

struct EvidenceChunk {
    std::string id;
    std::string text;
    ChunkKind kind = ChunkKind::document;
    std::string origin;  // sentence range for document chunks, entity surface for knowledge
};

struct ScoredEvidence {
    EvidenceChunk chunk;
    double score = 0.0;
};

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

struct SummaryVerdict {
    bool faithful = false;
    bool factual = false;
    std::string rationale;
    JudgeMethod method = JudgeMethod::vanilla;
};

enum class EvidenceRelation { support, contradict, none };

std::string to_string(EvidenceRelation relation);

struct EvidenceJudgment {
    bool relevant = false;
    EvidenceRelation relation = EvidenceRelation::none;
    std::string rationale;
};

enum class ClaimLabel { faithful, factual_hallucination, non_factual_hallucination, unknown };

std::string to_string(ClaimLabel label);

struct ClaimVerdict {
    Claim claim;
    std::optional<EvidenceJudgment> doc_judgment;
    std::optional<EvidenceJudgment> kb_judgment;
    ClaimLabel claim_label = ClaimLabel::unknown;
};

// ---------------------------------------------------------------------------
// Entities and knowledge
// ---------------------------------------------------------------------------

struct EntityMention {
    std::string surface;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::string entity_type;
};

enum class KnowledgeSource { wikidata, llm_generated };

std::string to_string(KnowledgeSource source);
std::optional<KnowledgeSource> knowledge_source_from_string(std::string_view text);

struct EntityKnowledge {
    std::string entity_surface;
    std::string description;
    KnowledgeSource source = KnowledgeSource::wikidata;
    std::string retrieved_at;  // ISO-8601 UTC
};

// ---------------------------------------------------------------------------
// Dataset records
// ---------------------------------------------------------------------------

enum class SeedSource { xent, factcollect, generic };

std::string to_string(SeedSource source);
std::optional<SeedSource> seed_source_from_string(std::string_view text);

struct SpanAnnotation {
    std::size_t span_start = 0;
    std::size_t span_end = 0;
    std::string label;
};

struct SeedRecord {
    std::string id;
    std::string document;
    std::string summary;
    SeedSource seed_source = SeedSource::generic;
    std::vector<SpanAnnotation> annotations;
    // Record-level verdict carried by FactCollect ("correct"/...) and by
    // generic pre-labeled corpora (one of the three summary labels).
    std::optional<std::string> record_label;
};

struct BenchmarkRecord {
    std::string id;
    std::string document;
    std::string summary;
    SummaryLabel label = SummaryLabel::no_hallucination;
    std::optional<std::string> injected_entity;
    std::optional<std::string> injected_description;
    std::optional<KnowledgeSource> injection_source;
    std::string seed_id;

    void validate() const;  // throws MixhalError(validation) on invariant breach
};

struct PredictionRecord {
    std::string id;
    JudgeMethod method = JudgeMethod::vanilla;
    std::string model_id;
    std::optional<SummaryLabel> predicted_label;  // nullopt == unjudged
    SummaryLabel gold_label = SummaryLabel::no_hallucination;
    std::vector<ClaimVerdict> claim_verdicts;
    std::vector<std::string> anomaly_flags;
    std::string trace_ref;
};

}  // namespace mixhal
