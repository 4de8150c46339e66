#pragma once

#include <string>

#include "mixhal/llm_gateway.hpp"

namespace mixhal {

// Chat-completion backend speaking the common JSON wire format:
//   POST {base_url}{path}
//   {"model": ..., "messages": [{"role": "system"|"user", "content": ...}],
//    "temperature": ..., "max_tokens": ...}
// and reading choices[0].message.content from the response.
class HttpBackend : public CompletionBackend {
public:
    struct Config {
        std::string base_url;  // scheme://host[:port]
        std::string api_key;
        std::string path = "/v1/chat/completions";
        int timeout_seconds = 120;
    };

    // Reads MIXHAL_API_BASE and MIXHAL_API_KEY.
    static Config config_from_env();

    explicit HttpBackend(Config config);

    std::string id() const override;
    std::string complete(const PromptRequest& request) override;

private:
    Config config_;
};

}  // namespace mixhal
