#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixhal::prompts {

// Template text embedded at build time from templates/*.txt.
const std::string& vanilla_judge();
const std::string& icl_judge();
const std::string& cot_judge();
const std::string& claim_extraction();
const std::string& knowledge_generation();
const std::string& reflection();
const std::string& evidence_judge();
const std::string& claim_query();

// (file stem, content) for every shipped template.
const std::vector<std::pair<std::string, const std::string*>>& all_templates();

// Fills {slot} placeholders by literal substring replacement.
std::string render(std::string tmpl,
                   std::initializer_list<std::pair<std::string_view, std::string_view>> slots);

}  // namespace mixhal::prompts
