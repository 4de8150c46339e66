#include "mixhal/prompt_templates.hpp"

#include "mixhal/text_utils.hpp"
#include "prompt_templates_data.hpp"

namespace mixhal::prompts {

namespace {
const std::string& intern(const char* text) {
    // One static string per distinct pointer; templates are few and fixed.
    static std::vector<std::pair<const char*, std::string>> cache;
    for (auto& [key, value] : cache) {
        if (key == text) return value;
    }
    cache.emplace_back(text, std::string(text));
    return cache.back().second;
}
}  // namespace

const std::string& vanilla_judge() { return intern(data::kVanillaJudge); }
const std::string& icl_judge() { return intern(data::kIclJudge); }
const std::string& cot_judge() { return intern(data::kCotJudge); }
const std::string& claim_extraction() { return intern(data::kClaimExtraction); }
const std::string& knowledge_generation() { return intern(data::kKnowledgeGeneration); }
const std::string& reflection() { return intern(data::kReflection); }
const std::string& evidence_judge() { return intern(data::kEvidenceJudge); }
const std::string& claim_query() { return intern(data::kClaimQuery); }

const std::vector<std::pair<std::string, const std::string*>>& all_templates() {
    static const std::vector<std::pair<std::string, const std::string*>> templates = {
        {"vanilla_judge", &vanilla_judge()},
        {"icl_judge", &icl_judge()},
        {"cot_judge", &cot_judge()},
        {"claim_extraction", &claim_extraction()},
        {"knowledge_generation", &knowledge_generation()},
        {"reflection", &reflection()},
        {"evidence_judge", &evidence_judge()},
        {"claim_query", &claim_query()},
    };
    return templates;
}

std::string render(std::string tmpl,
                   std::initializer_list<std::pair<std::string_view, std::string_view>> slots) {
    for (const auto& [name, value] : slots) {
        tmpl = replace_all(std::move(tmpl), std::string("{") + std::string(name) + "}", value);
    }
    return tmpl;
}

}  // namespace mixhal::prompts
