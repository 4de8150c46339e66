#include "mixhal/types.hpp"

#include "mixhal/error.hpp"

namespace mixhal {

std::string to_string(SummaryLabel label) {
    switch (label) {
        case SummaryLabel::factual_hallucination: return "factual_hallucination";
        case SummaryLabel::non_factual_hallucination: return "non_factual_hallucination";
        case SummaryLabel::no_hallucination: return "no_hallucination";
    }
    return "no_hallucination";
}

std::optional<SummaryLabel> label_from_string(std::string_view text) {
    if (text == "factual_hallucination") return SummaryLabel::factual_hallucination;
    if (text == "non_factual_hallucination") return SummaryLabel::non_factual_hallucination;
    if (text == "no_hallucination") return SummaryLabel::no_hallucination;
    return std::nullopt;
}

std::string to_string(JudgeMethod method) {
    switch (method) {
        case JudgeMethod::vanilla: return "vanilla";
        case JudgeMethod::icl: return "icl";
        case JudgeMethod::cot: return "cot";
        case JudgeMethod::kr: return "kr";
        case JudgeMethod::cr: return "cr";
        case JudgeMethod::rr: return "rr";
    }
    return "vanilla";
}

std::optional<JudgeMethod> method_from_string(std::string_view text) {
    if (text == "vanilla") return JudgeMethod::vanilla;
    if (text == "icl") return JudgeMethod::icl;
    if (text == "cot") return JudgeMethod::cot;
    if (text == "kr") return JudgeMethod::kr;
    if (text == "cr") return JudgeMethod::cr;
    if (text == "rr") return JudgeMethod::rr;
    return std::nullopt;
}

std::string to_string(EvidenceRelation relation) {
    switch (relation) {
        case EvidenceRelation::support: return "support";
        case EvidenceRelation::contradict: return "contradict";
        case EvidenceRelation::none: return "none";
    }
    return "none";
}

std::string to_string(ClaimLabel label) {
    switch (label) {
        case ClaimLabel::faithful: return "faithful";
        case ClaimLabel::factual_hallucination: return "factual_hallucination";
        case ClaimLabel::non_factual_hallucination: return "non_factual_hallucination";
        case ClaimLabel::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(KnowledgeSource source) {
    switch (source) {
        case KnowledgeSource::wikidata: return "wikidata";
        case KnowledgeSource::llm_generated: return "llm_generated";
    }
    return "wikidata";
}

std::optional<KnowledgeSource> knowledge_source_from_string(std::string_view text) {
    if (text == "wikidata") return KnowledgeSource::wikidata;
    if (text == "llm_generated") return KnowledgeSource::llm_generated;
    return std::nullopt;
}

std::string to_string(SeedSource source) {
    switch (source) {
        case SeedSource::xent: return "xent";
        case SeedSource::factcollect: return "factcollect";
        case SeedSource::generic: return "generic";
    }
    return "generic";
}

std::optional<SeedSource> seed_source_from_string(std::string_view text) {
    if (text == "xent") return SeedSource::xent;
    if (text == "factcollect") return SeedSource::factcollect;
    if (text == "generic") return SeedSource::generic;
    return std::nullopt;
}

void BenchmarkRecord::validate() const {
    if (document.empty()) throw MixhalError(ErrorKind::validation, "record " + id + ": empty document");
    if (summary.empty()) throw MixhalError(ErrorKind::validation, "record " + id + ": empty summary");

    const bool injected = injected_entity.has_value();
    if (label == SummaryLabel::no_hallucination) {
        if (injected) {
            throw MixhalError(ErrorKind::validation,
                              "record " + id + ": no_hallucination records must not carry an injection");
        }
        return;
    }
    if (!injected || !injected_description.has_value() || !injection_source.has_value()) {
        throw MixhalError(ErrorKind::validation,
                          "record " + id + ": hallucinated records require injection provenance");
    }
    if (summary.find(*injected_entity) == std::string::npos) {
        throw MixhalError(ErrorKind::validation,
                          "record " + id + ": injected entity not present in summary");
    }
    if (summary.find(*injected_description) == std::string::npos) {
        throw MixhalError(ErrorKind::validation,
                          "record " + id + ": injected description not present in summary");
    }
}

}  // namespace mixhal
