#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixhal/knowledge_store.hpp"
#include "mixhal/llm_gateway.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

struct EmbeddingVector {
    std::vector<double> values;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(const std::string& text) = 0;
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts);
};

// Deterministic normalized term-frequency embedder for offline runs and
// tests. Tokens claim vocabulary slots in first-seen order, so identical
// strings always map to identical vectors and disjoint vocabularies are
// exactly orthogonal while the vocabulary fits the dimension; past capacity
// tokens fall back to hashed slots (warned once).
class LexicalEmbedder : public Embedder {
public:
    explicit LexicalEmbedder(std::size_t dimension = 8192);

    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed(const std::string& text) override;

private:
    std::size_t slot_for(const std::string& token);

    std::size_t dimension_;
    std::mutex mutex_;
    std::map<std::string, std::size_t> vocabulary_;
    std::map<std::string, EmbeddingVector> cache_;
    bool overflow_warned_ = false;
};

// Remote embedding endpoint: POST {"model": ..., "input": [...]} returning
// {"data": [{"embedding": [...]}]}.
class RemoteEmbedder : public Embedder {
public:
    struct Config {
        std::string base_url;  // scheme://host[:port]
        std::string api_key;
        std::string model = "default-embedding";
        std::string path = "/v1/embeddings";
        int timeout_seconds = 120;
    };
    static Config config_from_env();  // MIXHAL_EMBED_BASE / MIXHAL_API_KEY / MIXHAL_EMBED_MODEL

    explicit RemoteEmbedder(Config config);

    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed(const std::string& text) override;
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;

private:
    Config config_;
    std::size_t dimension_ = 0;  // learned from the first response
    std::mutex mutex_;
    std::map<std::string, EmbeddingVector> cache_;
};

// --- chunking ---------------------------------------------------------------

// Sentence-unit sliding window over the document; every sentence lands in at
// least one chunk. Window advances by (max_units - overlap_units).
std::vector<EvidenceChunk> chunk_document(const std::string& document, int max_units = 3,
                                          int overlap_units = 1);

// One knowledge chunk per pool entry, origin = entity surface.
std::vector<EvidenceChunk> knowledge_chunks(const KnowledgePool& pool);

// --- scoring kernels ---------------------------------------------------------

// Reference implementation: plain loop, kept for testing and benchmarks.
std::vector<double> cosine_scores_serial(const EmbeddingVector& query,
                                         const std::vector<EmbeddingVector>& pool);

// OpenMP-parallel scoring; must produce results identical to the serial path.
std::vector<double> cosine_scores(const EmbeddingVector& query,
                                  const std::vector<EmbeddingVector>& pool);

// --- retrieval ---------------------------------------------------------------

// Exhaustive top-k by cosine similarity, descending; ties break by chunk id.
// k is clamped to the pool size. Optionally reports the full score vector.
std::vector<ScoredEvidence> retrieve_top(const Query& query,
                                         const std::vector<EvidenceChunk>& pool, int k,
                                         Embedder& embedder,
                                         std::vector<double>* all_scores = nullptr);

// Kind-filtered views of the evidence pool: the document and knowledge sides
// are always scored separately.
std::vector<ScoredEvidence> retrieve_document_evidence(const Query& query,
                                                       const std::vector<EvidenceChunk>& pool,
                                                       int k, Embedder& embedder,
                                                       std::vector<double>* all_scores = nullptr);
std::vector<ScoredEvidence> retrieve_knowledge_evidence(const Query& query,
                                                        const std::vector<EvidenceChunk>& pool,
                                                        int k, Embedder& embedder,
                                                        std::vector<double>* all_scores = nullptr);

// --- query generation ----------------------------------------------------------

struct QueryGenOptions {
    std::string model_id = "default";
    int max_tokens = 64;
};

// One retrieval query per claim; an empty completion falls back to the claim
// text itself.
Query generate_claim_query(const Claim& claim, LlmGateway& gateway,
                           const QueryGenOptions& options = {});

// Refined query produced by reflecting on the current evidence; an empty
// completion falls back to the claim text (the degenerate initial query).
Query generate_reflection_query(const Claim& claim, const ScoredEvidence& doc_evidence,
                                LlmGateway& gateway, const QueryGenOptions& options = {});

// --- tracing -------------------------------------------------------------------

class TraceWriter {
public:
    explicit TraceWriter(const std::filesystem::path& path);
    void write(const nlohmann::json& entry);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    std::ofstream out_;
};

void trace_retrieval(TraceWriter* trace, const std::string& record_id, const Query& query,
                     const std::vector<EvidenceChunk>& pool, const std::vector<double>& scores,
                     const std::vector<ScoredEvidence>& chosen);

}  // namespace mixhal
