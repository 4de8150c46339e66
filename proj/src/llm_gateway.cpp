#include "mixhal/llm_gateway.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "mixhal/error.hpp"
#include "mixhal/hashing.hpp"

namespace mixhal {

using nlohmann::json;

void PromptRequest::validate() const {
    if (user_text.empty()) throw MixhalError(ErrorKind::validation, "empty user_text");
    if (temperature < 0.0 || temperature > 2.0)
        throw MixhalError(ErrorKind::validation, "temperature must be in [0, 2]");
    if (max_tokens < 1) throw MixhalError(ErrorKind::validation, "max_tokens must be >= 1");
}

std::uint64_t PromptRequest::prompt_hash() const {
    std::uint64_t hash = fnv1a64(system_text);
    hash = fnv1a64_field(hash, user_text);
    return hash;
}

CompletionCache::CompletionCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
}

std::optional<CompletionText> CompletionCache::lookup(std::uint64_t key) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            CompletionText hit = it->second;
            hit.cached = true;
            return hit;
        }
    }
    if (!dir_) return std::nullopt;
    auto path = *dir_ / (to_hex(key) + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        json row = json::parse(in);
        CompletionText value;
        value.text = row.at("text").get<std::string>();
        value.backend_id = row.value("backend_id", std::string{});
        value.cached = true;
        std::lock_guard<std::mutex> lock(mutex_);
        entries_[key] = value;
        return value;
    } catch (const json::exception&) {
        return std::nullopt;  // corrupt entry; treated as a miss
    }
}

void CompletionCache::store(std::uint64_t key, const CompletionText& value) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        entries_[key] = value;
    }
    if (!dir_) return;
    // Last-writer-wins is fine: all writers hold identical content for a key.
    auto path = *dir_ / (to_hex(key) + ".json");
    std::ofstream out(path, std::ios::trunc);
    if (out) out << json{{"text", value.text}, {"backend_id", value.backend_id}}.dump();
}

LlmGateway::LlmGateway(std::shared_ptr<CompletionBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
    if (!backend_) throw MixhalError(ErrorKind::config, "gateway requires a backend");
    backend_id_ = backend_->id();
    std::optional<std::filesystem::path> dir = options_.cache_dir;
    if (!dir) {
        if (const char* env = std::getenv("MIXHAL_CACHE_DIR"); env && *env) dir = env;
    }
    if (options_.cache_enabled) cache_ = std::make_unique<CompletionCache>(dir);
}

std::uint64_t LlmGateway::cache_key(const PromptRequest& request) const {
    char temperature[32];
    std::snprintf(temperature, sizeof(temperature), "%.6g", request.temperature);
    std::uint64_t hash = fnv1a64(backend_id_);
    hash = fnv1a64_field(hash, request.model_id);
    hash = fnv1a64_field(hash, request.system_text);
    hash = fnv1a64_field(hash, request.user_text);
    hash = fnv1a64_field(hash, temperature);
    hash = fnv1a64_field(hash, std::to_string(request.max_tokens));
    return hash;
}

CompletionText LlmGateway::complete(const PromptRequest& request) {
    request.validate();

    const std::uint64_t key = cache_key(request);
    if (cache_) {
        if (auto hit = cache_->lookup(key)) return *hit;
    }

    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        try {
            CompletionText value;
            value.text = backend_->complete(request);
            value.backend_id = backend_id_;
            value.cached = false;
            if (cache_) cache_->store(key, value);
            return value;
        } catch (const TransientBackendError& e) {
            last_error = e.what();
            if (attempt < options_.max_attempts) {
                std::this_thread::sleep_for(options_.backoff_base * (1 << (attempt - 1)));
            }
        }
        // MixhalError from the backend (client errors etc.) propagates as-is.
    }
    throw MixhalError(ErrorKind::backend_unavailable,
                      "backend " + backend_id_ + " failed after " +
                          std::to_string(options_.max_attempts) + " attempts: " + last_error);
}

std::vector<CompletionOutcome> LlmGateway::complete_batch(
    const std::vector<PromptRequest>& requests, int max_in_flight) {
    if (max_in_flight < 1) throw MixhalError(ErrorKind::validation, "max_in_flight must be >= 1");

    std::vector<CompletionOutcome> outcomes(requests.size());
    if (requests.empty()) return outcomes;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= requests.size()) return;
            try {
                outcomes[i].value = complete(requests[i]);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };

    const std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), requests.size());
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
    return outcomes;
}

}  // namespace mixhal
