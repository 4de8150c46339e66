#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace mixhal {

struct PromptRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string model_id = "default";

    void validate() const;  // throws MixhalError(validation)

    // Hash of (system_text, user_text) only; used for mock scripting.
    std::uint64_t prompt_hash() const;
};

struct CompletionText {
    std::string text;
    std::string backend_id;
    bool cached = false;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual std::string id() const = 0;
    // Returns the raw completion. Throws TransientBackendError for retriable
    // failures and MixhalError(backend_unavailable) for final ones.
    virtual std::string complete(const PromptRequest& request) = 0;
};

// Content-addressed completion cache; optionally persisted under a directory
// as one JSON file per key so reruns are free across processes.
class CompletionCache {
public:
    explicit CompletionCache(std::optional<std::filesystem::path> dir = std::nullopt);

    std::optional<CompletionText> lookup(std::uint64_t key) const;
    void store(std::uint64_t key, const CompletionText& value);

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, CompletionText> entries_;
};

struct GatewayOptions {
    // Explicit cache directory; when unset, MIXHAL_CACHE_DIR is consulted and
    // the cache stays purely in-memory if that is unset too.
    std::optional<std::filesystem::path> cache_dir;
    bool cache_enabled = true;
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{100};
};

struct CompletionOutcome {
    std::optional<CompletionText> value;
    std::string error;
    bool ok() const { return value.has_value(); }
};

class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<CompletionBackend> backend, GatewayOptions options = {});

    // Cached completion with retry on transient backend failures.
    CompletionText complete(const PromptRequest& request);

    // Runs requests with at most max_in_flight concurrent backend calls.
    // Output order matches input order; failures are per-element.
    std::vector<CompletionOutcome> complete_batch(const std::vector<PromptRequest>& requests,
                                                  int max_in_flight);

    std::uint64_t cache_key(const PromptRequest& request) const;
    const std::string& backend_id() const { return backend_id_; }

private:
    std::shared_ptr<CompletionBackend> backend_;
    GatewayOptions options_;
    std::string backend_id_;
    std::unique_ptr<CompletionCache> cache_;
};

}  // namespace mixhal
