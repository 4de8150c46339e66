#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixhal/knowledge_store.hpp"
#include "mixhal/llm_gateway.hpp"
#include "mixhal/retrieval.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

enum class DirectMode { vanilla, icl, cot };

struct JudgeOptions {
    std::string model_id = "default";
    int max_tokens = 1024;
};

// Single-call judgment over the document/summary pair. The completion must
// carry a {"Faithfulness": bool, "Factuality": bool} object; CoT completions
// have it extracted from the end of the reasoning, which becomes the
// rationale. One repair call is issued before giving up with a parse error.
SummaryVerdict judge_direct(const std::string& document, const std::string& summary,
                            DirectMode mode, LlmGateway& gateway, const JudgeOptions& options = {});

// Relevance/supportiveness verdict for one (claim, evidence) pair.
EvidenceJudgment judge_claim_evidence(const Claim& claim, const EvidenceChunk& evidence,
                                      LlmGateway& gateway, const JudgeOptions& options = {});
EvidenceJudgment judge_claim_evidence_text(const Claim& claim, const std::string& evidence_text,
                                           LlmGateway& gateway, const JudgeOptions& options = {});

// Pure parser for the evidence-judgment output contract (Rationale /
// Relevant / Relation lines, case-insensitive). Returns nullopt when the
// Relevant line is missing.
std::optional<EvidenceJudgment> parse_evidence_judgment(const std::string& text);

// Claim-level decision table:
//   doc support                  -> faithful (kb ignored)
//   doc contradict/not-relevant  -> unfaithful, then
//       kb support               -> factual_hallucination
//       kb contradict            -> non_factual_hallucination
//       kb absent/not-relevant   -> unknown
ClaimLabel classify_claim(const EvidenceJudgment& doc_judgment,
                          const std::optional<EvidenceJudgment>& kb_judgment);

// Direct judgment with every entity description appended to the context as a
// "Background knowledge" block. Exactly one judging call.
SummaryVerdict judge_kr(const BenchmarkRecord& record, LlmGateway& gateway,
                        const KnowledgePool& pool, const JudgeOptions& options = {});

struct RetrievalContext {
    std::vector<Claim> claims;
    std::vector<EvidenceChunk> document_pool;
    std::vector<EvidenceChunk> knowledge_pool;  // may be empty
    Embedder* embedder = nullptr;
    int top_k = 1;
    TraceWriter* trace = nullptr;
    std::string record_id;
};

// Concurrent retrieval: per claim one shared query retrieves from both pool
// sides, each retrieved evidence is judged, and the decision table labels the
// claim. Per-claim failures yield unknown labels, never abort the record.
std::vector<ClaimVerdict> judge_cr(const BenchmarkRecord& record, LlmGateway& gateway,
                                   const RetrievalContext& context,
                                   const JudgeOptions& options = {});

// Reflection retrieval: document evidence first; only unfaithful or
// unsupported claims trigger one reflection pass that refines the query and
// judges knowledge evidence. Never loops.
std::vector<ClaimVerdict> judge_rr(const BenchmarkRecord& record, LlmGateway& gateway,
                                   const RetrievalContext& context,
                                   const JudgeOptions& options = {});

struct LabelOutcome {
    SummaryLabel label = SummaryLabel::no_hallucination;
    std::vector<std::string> anomalies;
};

// (faithful, factual) -> three-way label. The definitionally excluded
// (true, false) pair is coerced to non_factual_hallucination and flagged.
LabelOutcome verdict_to_label(const SummaryVerdict& verdict);

// Claim-to-summary aggregation with precedence NFH > FH > NoH; unknown claims
// contribute nothing, an all-unknown list degrades to no_hallucination with a
// low-confidence flag. Empty input is an aggregation error.
LabelOutcome aggregate_claims(const std::vector<ClaimVerdict>& verdicts);

}  // namespace mixhal
