#include "mixhal/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "mixhal/error.hpp"

namespace mixhal {

using nlohmann::json;

HttpBackend::Config HttpBackend::config_from_env() {
    Config config;
    if (const char* base = std::getenv("MIXHAL_API_BASE"); base && *base) config.base_url = base;
    if (const char* key = std::getenv("MIXHAL_API_KEY"); key && *key) config.api_key = key;
    return config;
}

HttpBackend::HttpBackend(Config config) : config_(std::move(config)) {
    if (config_.base_url.empty())
        throw MixhalError(ErrorKind::config, "HTTP backend requires a base URL (MIXHAL_API_BASE)");
}

std::string HttpBackend::id() const { return "http:" + config_.base_url; }

std::string HttpBackend::complete(const PromptRequest& request) {
    json messages = json::array();
    if (!request.system_text.empty()) {
        messages.push_back({{"role", "system"}, {"content", request.system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", request.user_text}});

    json body{
        {"model", request.model_id},
        {"messages", messages},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto result = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!result) {
        throw TransientBackendError("transport failure: " + httplib::to_string(result.error()));
    }
    if (result->status >= 500) {
        throw TransientBackendError("server error " + std::to_string(result->status));
    }
    if (result->status != 200) {
        throw MixhalError(ErrorKind::backend_unavailable,
                          "client error " + std::to_string(result->status) + ": " + result->body);
    }

    try {
        json response = json::parse(result->body);
        return response.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, std::string("malformed completion payload: ") + e.what());
    }
}

}  // namespace mixhal
