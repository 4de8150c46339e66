#include "mixhal/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include <httplib.h>

#include "mixhal/error.hpp"
#include "mixhal/hashing.hpp"
#include "mixhal/log.hpp"
#include "mixhal/prompt_templates.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

using nlohmann::json;

std::vector<EmbeddingVector> Embedder::embed_batch(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(texts.size());
    for (const auto& text : texts) vectors.push_back(embed(text));
    return vectors;
}

// --- LexicalEmbedder ---------------------------------------------------------

LexicalEmbedder::LexicalEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw MixhalError(ErrorKind::config, "embedder dimension must be positive");
}

std::size_t LexicalEmbedder::slot_for(const std::string& token) {
    auto it = vocabulary_.find(token);
    if (it != vocabulary_.end()) return it->second;
    if (vocabulary_.size() < dimension_) {
        std::size_t slot = vocabulary_.size();
        vocabulary_[token] = slot;
        return slot;
    }
    if (!overflow_warned_) {
        overflow_warned_ = true;
        log::warn("lexical embedder vocabulary exceeded dimension " + std::to_string(dimension_) +
                  "; falling back to hashed slots");
    }
    std::size_t slot = static_cast<std::size_t>(fnv1a64(token) % dimension_);
    vocabulary_[token] = slot;
    return slot;
}

EmbeddingVector LexicalEmbedder::embed(const std::string& text) {
    if (text.empty()) throw MixhalError(ErrorKind::validation, "cannot embed empty text");
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(text); it != cache_.end()) return it->second;

    EmbeddingVector vector;
    vector.values.assign(dimension_, 0.0);

    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        vector.values[slot_for(token)] += 1.0;
        token.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();

    double norm = 0.0;
    for (double v : vector.values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& v : vector.values) v /= norm;
    }

    cache_[text] = vector;
    return vector;
}

// --- RemoteEmbedder ----------------------------------------------------------

RemoteEmbedder::Config RemoteEmbedder::config_from_env() {
    Config config;
    if (const char* base = std::getenv("MIXHAL_EMBED_BASE"); base && *base) config.base_url = base;
    if (const char* key = std::getenv("MIXHAL_API_KEY"); key && *key) config.api_key = key;
    if (const char* model = std::getenv("MIXHAL_EMBED_MODEL"); model && *model) config.model = model;
    return config;
}

RemoteEmbedder::RemoteEmbedder(Config config) : config_(std::move(config)) {
    if (config_.base_url.empty())
        throw MixhalError(ErrorKind::config, "remote embedder requires a base URL (MIXHAL_EMBED_BASE)");
}

EmbeddingVector RemoteEmbedder::embed(const std::string& text) {
    auto vectors = embed_batch({text});
    return vectors.at(0);
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> result(texts.size());
    std::vector<std::size_t> missing;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            auto it = cache_.find(texts[i]);
            if (it != cache_.end()) {
                result[i] = it->second;
            } else {
                missing.push_back(i);
            }
        }
    }
    if (missing.empty()) return result;

    json input = json::array();
    for (std::size_t i : missing) input.push_back(texts[i]);

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    json body{{"model", config_.model}, {"input", input}};
    auto response = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!response || response->status != 200) {
        throw MixhalError(ErrorKind::backend_unavailable,
                          "embedding endpoint failure" +
                              (response ? (": status " + std::to_string(response->status)) : ""));
    }

    try {
        json payload = json::parse(response->body);
        const auto& data = payload.at("data");
        if (data.size() != missing.size()) {
            throw MixhalError(ErrorKind::parse, "embedding count mismatch");
        }
        std::lock_guard<std::mutex> lock(mutex_);
        for (std::size_t j = 0; j < missing.size(); ++j) {
            EmbeddingVector vector;
            for (const auto& value : data.at(j).at("embedding")) {
                vector.values.push_back(value.get<double>());
            }
            if (dimension_ == 0) dimension_ = vector.values.size();
            if (vector.values.size() != dimension_) {
                throw MixhalError(ErrorKind::parse, "inconsistent embedding dimension");
            }
            cache_[texts[missing[j]]] = vector;
            result[missing[j]] = std::move(vector);
        }
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, std::string("malformed embedding payload: ") + e.what());
    }
    return result;
}

// --- chunking ----------------------------------------------------------------

std::vector<EvidenceChunk> chunk_document(const std::string& document, int max_units,
                                          int overlap_units) {
    if (document.empty()) throw MixhalError(ErrorKind::validation, "empty document");
    if (max_units < 1) throw MixhalError(ErrorKind::validation, "max_units must be >= 1");
    if (overlap_units < 0 || overlap_units >= max_units)
        throw MixhalError(ErrorKind::validation, "overlap_units must satisfy 0 <= overlap < max_units");

    std::vector<std::string> sentences = split_sentences(document);
    if (sentences.empty()) throw MixhalError(ErrorKind::validation, "document has no sentences");

    const std::size_t n = sentences.size();
    const std::size_t window = static_cast<std::size_t>(max_units);
    const std::size_t step = static_cast<std::size_t>(max_units - overlap_units);

    std::vector<EvidenceChunk> chunks;
    std::size_t start = 0;
    while (true) {
        std::size_t end = std::min(start + window, n);
        std::string text;
        for (std::size_t i = start; i < end; ++i) {
            if (!text.empty()) text.push_back(' ');
            text += sentences[i];
        }
        EvidenceChunk chunk;
        chunk.id = "d" + std::to_string(chunks.size());
        chunk.text = std::move(text);
        chunk.kind = ChunkKind::document;
        chunk.origin = "sentences " + std::to_string(start + 1) + "-" + std::to_string(end);
        chunks.push_back(std::move(chunk));
        if (end >= n) break;
        start += step;
    }
    return chunks;
}

std::vector<EvidenceChunk> knowledge_chunks(const KnowledgePool& pool) {
    std::vector<EvidenceChunk> chunks;
    std::size_t index = 0;
    for (const auto& [normalized, knowledge] : pool.entries) {
        EvidenceChunk chunk;
        chunk.id = "k" + std::to_string(index++);
        chunk.text = knowledge.entity_surface + ": " + knowledge.description;
        chunk.kind = ChunkKind::knowledge;
        chunk.origin = knowledge.entity_surface;
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

// --- scoring kernels -----------------------------------------------------------

namespace {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    const std::size_t n = std::min(a.values.size(), b.values.size());
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a.values[i] * b.values[i];
    for (double v : a.values) norm_a += v * v;
    for (double v : b.values) norm_b += v * v;
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

}  // namespace

std::vector<double> cosine_scores_serial(const EmbeddingVector& query,
                                         const std::vector<EmbeddingVector>& pool) {
    std::vector<double> scores(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) scores[i] = cosine(query, pool[i]);
    return scores;
}

std::vector<double> cosine_scores(const EmbeddingVector& query,
                                  const std::vector<EmbeddingVector>& pool) {
    std::vector<double> scores(pool.size());
    const std::int64_t n = static_cast<std::int64_t>(pool.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        scores[static_cast<std::size_t>(i)] = cosine(query, pool[static_cast<std::size_t>(i)]);
    }
    return scores;
}

// --- retrieval -------------------------------------------------------------------

std::vector<ScoredEvidence> retrieve_top(const Query& query,
                                         const std::vector<EvidenceChunk>& pool, int k,
                                         Embedder& embedder, std::vector<double>* all_scores) {
    if (pool.empty()) throw MixhalError(ErrorKind::retrieval, "empty evidence pool");
    if (k < 1) throw MixhalError(ErrorKind::validation, "k must be >= 1");
    if (query.text.empty()) throw MixhalError(ErrorKind::validation, "empty query");

    EmbeddingVector query_vector = embedder.embed(query.text);
    std::vector<std::string> texts;
    texts.reserve(pool.size());
    for (const auto& chunk : pool) texts.push_back(chunk.text);
    std::vector<EmbeddingVector> chunk_vectors = embedder.embed_batch(texts);

    std::vector<double> scores = cosine_scores(query_vector, chunk_vectors);
    if (all_scores) *all_scores = scores;

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return pool[a].id < pool[b].id;
    });

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
    std::vector<ScoredEvidence> top;
    top.reserve(take);
    for (std::size_t i = 0; i < take; ++i) top.push_back({pool[order[i]], scores[order[i]]});
    return top;
}

namespace {

std::vector<ScoredEvidence> retrieve_kind(const Query& query,
                                          const std::vector<EvidenceChunk>& pool, ChunkKind kind,
                                          int k, Embedder& embedder,
                                          std::vector<double>* all_scores) {
    std::vector<EvidenceChunk> filtered;
    for (const auto& chunk : pool) {
        if (chunk.kind == kind) filtered.push_back(chunk);
    }
    if (filtered.empty()) {
        throw MixhalError(ErrorKind::retrieval, kind == ChunkKind::document
                                                    ? "no document evidence in pool"
                                                    : "no knowledge evidence in pool");
    }
    return retrieve_top(query, filtered, k, embedder, all_scores);
}

}  // namespace

std::vector<ScoredEvidence> retrieve_document_evidence(const Query& query,
                                                       const std::vector<EvidenceChunk>& pool,
                                                       int k, Embedder& embedder,
                                                       std::vector<double>* all_scores) {
    return retrieve_kind(query, pool, ChunkKind::document, k, embedder, all_scores);
}

std::vector<ScoredEvidence> retrieve_knowledge_evidence(const Query& query,
                                                        const std::vector<EvidenceChunk>& pool,
                                                        int k, Embedder& embedder,
                                                        std::vector<double>* all_scores) {
    return retrieve_kind(query, pool, ChunkKind::knowledge, k, embedder, all_scores);
}

// --- query generation -----------------------------------------------------------

Query generate_claim_query(const Claim& claim, LlmGateway& gateway, const QueryGenOptions& options) {
    PromptRequest request;
    request.user_text = prompts::render(prompts::claim_query(), {{"claim", claim.text}});
    request.max_tokens = options.max_tokens;
    request.model_id = options.model_id;

    Query query;
    query.claim_index = claim.index;
    query.stage = QueryStage::initial;

    std::string text = trim(gateway.complete(request).text);
    if (text.empty()) {
        log::warn("empty query completion for claim " + std::to_string(claim.index) +
                  "; using claim text");
        query.text = claim.text;
    } else {
        query.text = text;
    }
    return query;
}

Query generate_reflection_query(const Claim& claim, const ScoredEvidence& doc_evidence,
                                LlmGateway& gateway, const QueryGenOptions& options) {
    PromptRequest request;
    request.user_text = prompts::render(
        prompts::reflection(),
        {{"claim", claim.text}, {"retrieved evidence list", doc_evidence.chunk.text}});
    request.max_tokens = options.max_tokens;
    request.model_id = options.model_id;

    Query query;
    query.claim_index = claim.index;
    query.stage = QueryStage::reflective;

    std::string text = trim(gateway.complete(request).text);
    if (text.empty()) {
        log::warn("empty reflection completion for claim " + std::to_string(claim.index) +
                  "; using claim text");
        query.text = claim.text;
    } else {
        query.text = text;
    }
    return query;
}

// --- tracing ---------------------------------------------------------------------

TraceWriter::TraceWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::trunc) {
    if (!out_) throw MixhalError(ErrorKind::io, "cannot open trace file " + path.string());
}

void TraceWriter::write(const json& entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << entry.dump() << '\n';
    out_.flush();
}

void trace_retrieval(TraceWriter* trace, const std::string& record_id, const Query& query,
                     const std::vector<EvidenceChunk>& pool, const std::vector<double>& scores,
                     const std::vector<ScoredEvidence>& chosen) {
    if (!trace) return;
    json score_rows = json::array();
    for (std::size_t i = 0; i < pool.size() && i < scores.size(); ++i) {
        score_rows.push_back({{"chunk_id", pool[i].id}, {"score", scores[i]}});
    }
    json chosen_ids = json::array();
    for (const auto& evidence : chosen) chosen_ids.push_back(evidence.chunk.id);
    trace->write({
        {"record_id", record_id},
        {"claim_index", query.claim_index},
        {"stage", query.stage == QueryStage::initial ? "initial" : "reflective"},
        {"query", query.text},
        {"scores", score_rows},
        {"chosen", chosen_ids},
    });
}

}  // namespace mixhal
