#include "mixhal/judges.hpp"

#include <json.hpp>

#include "mixhal/error.hpp"
#include "mixhal/log.hpp"
#include "mixhal/prompt_templates.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

using nlohmann::json;

namespace {

// Last balanced {...} object in the text, scanning from the end; CoT
// completions put the JSON after free-form reasoning.
std::optional<std::string> last_json_object(const std::string& text) {
    std::size_t close = text.rfind('}');
    while (close != std::string::npos) {
        int depth = 0;
        for (std::size_t i = close + 1; i-- > 0;) {
            if (text[i] == '}') ++depth;
            else if (text[i] == '{') {
                --depth;
                if (depth == 0) return text.substr(i, close - i + 1);
            }
            if (i == 0) break;
        }
        if (close == 0) break;
        close = text.rfind('}', close - 1);
    }
    return std::nullopt;
}

std::optional<bool> bool_field(const json& object, const std::string& name) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        if (to_lower_ascii(it.key()) != to_lower_ascii(name)) continue;
        if (it.value().is_boolean()) return it.value().get<bool>();
        if (it.value().is_string()) {
            std::string value = to_lower_ascii(it.value().get<std::string>());
            if (value == "true") return true;
            if (value == "false") return false;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

struct ParsedVerdict {
    bool faithful;
    bool factual;
    std::string rationale;
};

std::optional<ParsedVerdict> parse_direct_verdict(const std::string& completion) {
    auto object_text = last_json_object(completion);
    if (!object_text) return std::nullopt;
    json object;
    try {
        object = json::parse(*object_text);
    } catch (const json::exception&) {
        return std::nullopt;
    }
    auto faithful = bool_field(object, "Faithfulness");
    auto factual = bool_field(object, "Factuality");
    if (!faithful || !factual) return std::nullopt;

    ParsedVerdict verdict{*faithful, *factual, {}};
    std::size_t object_pos = completion.rfind(*object_text);
    if (object_pos != std::string::npos && object_pos > 0) {
        verdict.rationale = trim(completion.substr(0, object_pos));
    }
    return verdict;
}

std::string repair_prompt(const std::string& completion) {
    return "Extract the JSON object with boolean fields \"Faithfulness\" and \"Factuality\" "
           "from the following text. Reply with only the JSON object.\n\nText:\n" +
           completion + "\n\nJSON:";
}

JudgeMethod method_for(DirectMode mode) {
    switch (mode) {
        case DirectMode::vanilla: return JudgeMethod::vanilla;
        case DirectMode::icl: return JudgeMethod::icl;
        case DirectMode::cot: return JudgeMethod::cot;
    }
    return JudgeMethod::vanilla;
}

SummaryVerdict judge_with_context(const std::string& context_document, const std::string& summary,
                                  DirectMode mode, JudgeMethod method, LlmGateway& gateway,
                                  const JudgeOptions& options) {
    const std::string& tmpl = mode == DirectMode::icl   ? prompts::icl_judge()
                              : mode == DirectMode::cot ? prompts::cot_judge()
                                                        : prompts::vanilla_judge();
    PromptRequest request;
    request.user_text = prompts::render(tmpl, {{"doc", context_document}, {"summary", summary}});
    request.max_tokens = options.max_tokens;
    request.model_id = options.model_id;

    CompletionText completion = gateway.complete(request);
    auto parsed = parse_direct_verdict(completion.text);
    if (!parsed) {
        PromptRequest repair;
        repair.user_text = repair_prompt(completion.text);
        repair.max_tokens = 128;
        repair.model_id = options.model_id;
        parsed = parse_direct_verdict(gateway.complete(repair).text);
    }
    if (!parsed) {
        throw MixhalError(ErrorKind::parse, "no parseable judgment object after repair retry");
    }

    SummaryVerdict verdict;
    verdict.faithful = parsed->faithful;
    verdict.factual = parsed->factual;
    verdict.rationale = parsed->rationale;
    verdict.method = method;
    return verdict;
}

}  // namespace

SummaryVerdict judge_direct(const std::string& document, const std::string& summary,
                            DirectMode mode, LlmGateway& gateway, const JudgeOptions& options) {
    if (document.empty() || summary.empty()) {
        throw MixhalError(ErrorKind::validation, "document and summary must be non-empty");
    }
    return judge_with_context(document, summary, mode, method_for(mode), gateway, options);
}

std::optional<EvidenceJudgment> parse_evidence_judgment(const std::string& text) {
    EvidenceJudgment judgment;
    bool saw_relevant = false;
    bool saw_relation = false;

    for (const auto& raw_line : split_lines(text)) {
        std::string line = trim(raw_line);
        std::string lowered = to_lower_ascii(line);
        if (starts_with(lowered, "rationale:")) {
            judgment.rationale = trim(line.substr(10));
        } else if (starts_with(lowered, "relevant:")) {
            std::string value = trim(lowered.substr(9));
            judgment.relevant = starts_with(value, "yes");
            saw_relevant = true;
        } else if (starts_with(lowered, "relation:")) {
            std::string value = trim(lowered.substr(9));
            if (starts_with(value, "support")) {
                judgment.relation = EvidenceRelation::support;
            } else if (starts_with(value, "contradict")) {
                judgment.relation = EvidenceRelation::contradict;
            } else {
                judgment.relation = EvidenceRelation::none;
            }
            saw_relation = true;
        }
    }

    if (!saw_relevant) return std::nullopt;
    if (!judgment.relevant) judgment.relation = EvidenceRelation::none;
    if (!saw_relation && judgment.relevant) judgment.relation = EvidenceRelation::none;
    return judgment;
}

EvidenceJudgment judge_claim_evidence_text(const Claim& claim, const std::string& evidence_text,
                                           LlmGateway& gateway, const JudgeOptions& options) {
    PromptRequest request;
    request.user_text = prompts::render(prompts::evidence_judge(),
                                        {{"claim", claim.text}, {"candidate", evidence_text}});
    request.max_tokens = options.max_tokens;
    request.model_id = options.model_id;

    CompletionText completion = gateway.complete(request);
    auto judgment = parse_evidence_judgment(completion.text);
    if (!judgment) {
        PromptRequest repair = request;
        repair.user_text += "\n\nYour previous reply was not in the requested format. Answer "
                            "again using exactly the Rationale / Relevant / Relation lines.";
        judgment = parse_evidence_judgment(gateway.complete(repair).text);
    }
    if (!judgment) {
        throw MixhalError(ErrorKind::parse, "missing Relevant line in evidence judgment");
    }
    return *judgment;
}

EvidenceJudgment judge_claim_evidence(const Claim& claim, const EvidenceChunk& evidence,
                                      LlmGateway& gateway, const JudgeOptions& options) {
    return judge_claim_evidence_text(claim, evidence.text, gateway, options);
}

namespace {

bool effectively_relevant(const EvidenceJudgment& judgment) {
    return judgment.relevant && judgment.relation != EvidenceRelation::none;
}

std::string joined_evidence(const std::vector<ScoredEvidence>& evidence) {
    std::string text;
    for (const auto& scored : evidence) {
        if (!text.empty()) text += "\n";
        text += scored.chunk.text;
    }
    return text;
}

}  // namespace

ClaimLabel classify_claim(const EvidenceJudgment& doc_judgment,
                          const std::optional<EvidenceJudgment>& kb_judgment) {
    if (effectively_relevant(doc_judgment) && doc_judgment.relation == EvidenceRelation::support) {
        return ClaimLabel::faithful;
    }
    // Contradicted or unsupported by the document: unfaithful either way; the
    // knowledge side decides which hallucination type.
    if (!kb_judgment || !effectively_relevant(*kb_judgment)) return ClaimLabel::unknown;
    if (kb_judgment->relation == EvidenceRelation::support) return ClaimLabel::factual_hallucination;
    return ClaimLabel::non_factual_hallucination;
}

SummaryVerdict judge_kr(const BenchmarkRecord& record, LlmGateway& gateway,
                        const KnowledgePool& pool, const JudgeOptions& options) {
    std::string context = record.document;
    if (pool.entries.empty()) {
        log::warn("record " + record.id + ": no resolvable entities; KR degenerates to vanilla");
    } else {
        context += "\n\nBackground knowledge:";
        for (const auto& [normalized, knowledge] : pool.entries) {
            context += "\n- " + knowledge.entity_surface + ": " + knowledge.description;
        }
    }
    SummaryVerdict verdict = judge_with_context(context, record.summary, DirectMode::vanilla,
                                                JudgeMethod::kr, gateway, options);
    return verdict;
}

namespace {

ClaimVerdict judge_claim_cr(const Claim& claim, LlmGateway& gateway,
                            const RetrievalContext& context, const JudgeOptions& options) {
    ClaimVerdict verdict;
    verdict.claim = claim;

    Query query = generate_claim_query(claim, gateway, {options.model_id});

    std::vector<double> scores;
    auto doc_evidence =
        retrieve_document_evidence(query, context.document_pool, context.top_k, *context.embedder,
                                   &scores);
    trace_retrieval(context.trace, context.record_id, query, context.document_pool, scores,
                    doc_evidence);
    verdict.doc_judgment =
        judge_claim_evidence_text(claim, joined_evidence(doc_evidence), gateway, options);

    if (!context.knowledge_pool.empty()) {
        auto kb_evidence = retrieve_knowledge_evidence(query, context.knowledge_pool,
                                                       context.top_k, *context.embedder, &scores);
        trace_retrieval(context.trace, context.record_id, query, context.knowledge_pool, scores,
                        kb_evidence);
        verdict.kb_judgment =
            judge_claim_evidence_text(claim, joined_evidence(kb_evidence), gateway, options);
    }

    verdict.claim_label = classify_claim(*verdict.doc_judgment, verdict.kb_judgment);
    return verdict;
}

ClaimVerdict judge_claim_rr(const Claim& claim, LlmGateway& gateway,
                            const RetrievalContext& context, const JudgeOptions& options) {
    ClaimVerdict verdict;
    verdict.claim = claim;

    Query query = generate_claim_query(claim, gateway, {options.model_id});

    std::vector<double> scores;
    auto doc_evidence =
        retrieve_document_evidence(query, context.document_pool, context.top_k, *context.embedder,
                                   &scores);
    trace_retrieval(context.trace, context.record_id, query, context.document_pool, scores,
                    doc_evidence);
    verdict.doc_judgment =
        judge_claim_evidence_text(claim, joined_evidence(doc_evidence), gateway, options);

    if (verdict.doc_judgment->relevant &&
        verdict.doc_judgment->relation == EvidenceRelation::support) {
        verdict.claim_label = ClaimLabel::faithful;
        return verdict;  // faithful at stage 1: no reflection pass
    }

    if (!context.knowledge_pool.empty()) {
        Query reflective =
            generate_reflection_query(claim, doc_evidence.front(), gateway, {options.model_id});
        auto kb_evidence = retrieve_knowledge_evidence(reflective, context.knowledge_pool,
                                                       context.top_k, *context.embedder, &scores);
        trace_retrieval(context.trace, context.record_id, reflective, context.knowledge_pool,
                        scores, kb_evidence);
        verdict.kb_judgment =
            judge_claim_evidence_text(claim, joined_evidence(kb_evidence), gateway, options);
    }

    verdict.claim_label = classify_claim(*verdict.doc_judgment, verdict.kb_judgment);
    return verdict;
}

template <typename PerClaim>
std::vector<ClaimVerdict> judge_claims(const BenchmarkRecord& record,
                                       const RetrievalContext& context, PerClaim per_claim) {
    if (context.embedder == nullptr) {
        throw MixhalError(ErrorKind::config, "retrieval judging requires an embedder");
    }
    if (context.claims.empty()) {
        throw MixhalError(ErrorKind::validation, "record " + record.id + ": no claims to judge");
    }

    std::vector<ClaimVerdict> verdicts;
    verdicts.reserve(context.claims.size());
    for (const auto& claim : context.claims) {
        try {
            verdicts.push_back(per_claim(claim));
        } catch (const std::exception& e) {
            log::warn("record " + record.id + " claim " + std::to_string(claim.index) +
                      ": " + e.what());
            ClaimVerdict failed;
            failed.claim = claim;
            failed.claim_label = ClaimLabel::unknown;
            verdicts.push_back(std::move(failed));
        }
    }
    return verdicts;
}

}  // namespace

std::vector<ClaimVerdict> judge_cr(const BenchmarkRecord& record, LlmGateway& gateway,
                                   const RetrievalContext& context, const JudgeOptions& options) {
    return judge_claims(record, context, [&](const Claim& claim) {
        return judge_claim_cr(claim, gateway, context, options);
    });
}

std::vector<ClaimVerdict> judge_rr(const BenchmarkRecord& record, LlmGateway& gateway,
                                   const RetrievalContext& context, const JudgeOptions& options) {
    return judge_claims(record, context, [&](const Claim& claim) {
        return judge_claim_rr(claim, gateway, context, options);
    });
}

LabelOutcome verdict_to_label(const SummaryVerdict& verdict) {
    LabelOutcome outcome;
    if (verdict.faithful && verdict.factual) {
        outcome.label = SummaryLabel::no_hallucination;
    } else if (!verdict.faithful && verdict.factual) {
        outcome.label = SummaryLabel::factual_hallucination;
    } else if (!verdict.faithful && !verdict.factual) {
        outcome.label = SummaryLabel::non_factual_hallucination;
    } else {
        // faithful && !factual is definitionally excluded for factually
        // correct source documents; coerce and flag.
        outcome.label = SummaryLabel::non_factual_hallucination;
        outcome.anomalies.push_back("coerced_faithful_nonfactual");
        log::warn("coerced definitionally-excluded verdict (faithful, non-factual)");
    }
    return outcome;
}

LabelOutcome aggregate_claims(const std::vector<ClaimVerdict>& verdicts) {
    if (verdicts.empty()) {
        throw MixhalError(ErrorKind::aggregation, "no claim verdicts to aggregate");
    }

    bool any_nonfactual = false;
    bool any_factual = false;
    bool any_known = false;
    for (const auto& verdict : verdicts) {
        switch (verdict.claim_label) {
            case ClaimLabel::non_factual_hallucination: any_nonfactual = true; any_known = true; break;
            case ClaimLabel::factual_hallucination: any_factual = true; any_known = true; break;
            case ClaimLabel::faithful: any_known = true; break;
            case ClaimLabel::unknown: break;
        }
    }

    LabelOutcome outcome;
    if (any_nonfactual) {
        outcome.label = SummaryLabel::non_factual_hallucination;
    } else if (any_factual) {
        outcome.label = SummaryLabel::factual_hallucination;
    } else {
        outcome.label = SummaryLabel::no_hallucination;
        if (!any_known) {
            outcome.anomalies.push_back("low_confidence_aggregation");
            log::warn("all claim verdicts unknown; defaulting to no_hallucination");
        }
    }
    return outcome;
}

}  // namespace mixhal
