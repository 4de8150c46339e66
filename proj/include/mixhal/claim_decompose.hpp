#pragma once

#include <string>
#include <vector>

#include "mixhal/llm_gateway.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

// Deterministic parser for the claim-extraction output contract: one claim
// per line, list markers and echoed headers stripped, empties dropped.
std::vector<Claim> parse_claim_response(const std::string& text);

struct DecomposeOptions {
    std::string model_id = "default";
    int max_tokens = 512;
    // When set, an empty completion degrades to the whole summary as a single
    // claim instead of raising a decomposition error.
    bool single_claim_fallback = false;
};

std::vector<Claim> decompose_claims(const std::string& summary, LlmGateway& gateway,
                                    const DecomposeOptions& options = {});

}  // namespace mixhal
