#include "mixhal/mock_backend.hpp"

#include <fstream>

#include <json.hpp>

#include "mixhal/error.hpp"

namespace mixhal {

using nlohmann::json;

std::string MockBackend::complete(const PromptRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);

    if (fail_next_ > 0) {
        --fail_next_;
        calls_.push_back({request, "fail:next", ""});
        if (fail_next_transient_) throw TransientBackendError("scripted transient failure");
        throw MixhalError(ErrorKind::backend_unavailable, "scripted failure");
    }
    for (const auto& rule : fail_rules_) {
        if (std::regex_search(request.user_text, rule.re)) {
            calls_.push_back({request, "fail:" + rule.pattern, ""});
            if (rule.transient) throw TransientBackendError("scripted transient failure");
            throw MixhalError(ErrorKind::backend_unavailable, "scripted failure: " + rule.pattern);
        }
    }

    if (auto it = exact_.find(request.prompt_hash()); it != exact_.end()) {
        calls_.push_back({request, "exact", it->second});
        return it->second;
    }
    for (const auto& rule : rules_) {
        if (std::regex_search(request.user_text, rule.re)) {
            calls_.push_back({request, "rule:" + rule.pattern, rule.response});
            return rule.response;
        }
    }
    calls_.push_back({request, "fallback", fallback_});
    return fallback_;
}

void MockBackend::script_exact(const PromptRequest& request, std::string response) {
    std::lock_guard<std::mutex> lock(mutex_);
    exact_[request.prompt_hash()] = std::move(response);
}

void MockBackend::script_exact_hash(std::uint64_t prompt_hash, std::string response) {
    std::lock_guard<std::mutex> lock(mutex_);
    exact_[prompt_hash] = std::move(response);
}

void MockBackend::add_rule(const std::string& pattern, std::string response) {
    std::lock_guard<std::mutex> lock(mutex_);
    rules_.push_back({pattern, std::regex(pattern), std::move(response)});
}

void MockBackend::add_fail_rule(const std::string& pattern, bool transient) {
    std::lock_guard<std::mutex> lock(mutex_);
    fail_rules_.push_back({pattern, std::regex(pattern), transient});
}

void MockBackend::set_fallback(std::string text) {
    std::lock_guard<std::mutex> lock(mutex_);
    fallback_ = std::move(text);
}

void MockBackend::fail_next(int count, bool transient) {
    std::lock_guard<std::mutex> lock(mutex_);
    fail_next_ = count;
    fail_next_transient_ = transient;
}

std::shared_ptr<MockBackend> MockBackend::from_script_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw MixhalError(ErrorKind::io, "cannot open mock script " + file.string());
    json script;
    try {
        script = json::parse(in);
    } catch (const json::exception& e) {
        throw MixhalError(ErrorKind::parse, "mock script " + file.string() + ": " + e.what());
    }

    auto backend = std::make_shared<MockBackend>();
    for (const auto& entry : script.value("exact", json::array())) {
        PromptRequest request;
        request.system_text = entry.value("system", std::string{});
        request.user_text = entry.at("user").get<std::string>();
        backend->script_exact(request, entry.at("response").get<std::string>());
    }
    for (const auto& entry : script.value("rules", json::array())) {
        backend->add_rule(entry.at("pattern").get<std::string>(),
                          entry.at("response").get<std::string>());
    }
    for (const auto& pattern : script.value("fail_rules", json::array())) {
        backend->add_fail_rule(pattern.get<std::string>());
    }
    backend->set_fallback(script.value("fallback", std::string{}));
    return backend;
}

std::vector<MockCall> MockBackend::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

std::size_t MockBackend::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_.size();
}

void MockBackend::clear_calls() {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.clear();
}

}  // namespace mixhal
