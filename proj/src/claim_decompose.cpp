#include "mixhal/claim_decompose.hpp"

#include <cctype>

#include "mixhal/error.hpp"
#include "mixhal/prompt_templates.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

namespace {

// Strips leading enumeration markers: "1.", "2)", "-", "*", "•".
std::string strip_list_marker(const std::string& line) {
    std::size_t i = 0;
    const std::size_t n = line.size();
    std::size_t digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(line[i]))) {
        ++i;
        ++digits;
    }
    if (digits > 0 && i < n && (line[i] == '.' || line[i] == ')')) {
        ++i;
        return trim(line.substr(i));
    }
    if (n >= 1 && (line[0] == '-' || line[0] == '*')) return trim(line.substr(1));
    if (n >= 3 && line.compare(0, 3, "\xe2\x80\xa2") == 0) return trim(line.substr(3));
    return line;
}

bool is_header(const std::string& line) {
    std::string lowered = to_lower_ascii(line);
    return lowered == "claims:" || lowered == "claims" || lowered == "claim:" ||
           lowered == "answer:";
}

}  // namespace

std::vector<Claim> parse_claim_response(const std::string& text) {
    std::vector<Claim> claims;
    for (const auto& raw_line : split_lines(text)) {
        std::string line = trim(raw_line);
        if (line.empty()) continue;
        if (is_header(line)) continue;
        line = strip_list_marker(line);
        if (line.empty()) continue;
        claims.push_back({static_cast<int>(claims.size()), line});
    }
    return claims;
}

std::vector<Claim> decompose_claims(const std::string& summary, LlmGateway& gateway,
                                    const DecomposeOptions& options) {
    if (summary.empty()) throw MixhalError(ErrorKind::validation, "empty summary");

    PromptRequest request;
    request.user_text = prompts::render(prompts::claim_extraction(), {{"summary", summary}});
    request.max_tokens = options.max_tokens;
    request.model_id = options.model_id;

    CompletionText completion = gateway.complete(request);
    std::vector<Claim> claims = parse_claim_response(completion.text);
    if (claims.empty()) {
        if (options.single_claim_fallback) return {{0, summary}};
        throw MixhalError(ErrorKind::decomposition, "no claims parsed from completion");
    }
    return claims;
}

}  // namespace mixhal
