#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <regex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mixhal/llm_gateway.hpp"

namespace mixhal {

struct MockCall {
    PromptRequest request;
    std::string matched;  // "exact" | "rule:<pattern>" | "fallback" | "fail:<pattern>"
    std::string response;
};

// Offline scripted backend. Resolution order: exact prompt hash, then regex
// rules in insertion order, then the fallback string. Performs no I/O and
// keeps a ledger of every call for structural assertions in tests.
class MockBackend : public CompletionBackend {
public:
    std::string id() const override { return "mock"; }
    std::string complete(const PromptRequest& request) override;

    void script_exact(const PromptRequest& request, std::string response);
    void script_exact_hash(std::uint64_t prompt_hash, std::string response);

    // ECMAScript regex, searched against user_text.
    void add_rule(const std::string& pattern, std::string response);
    void add_fail_rule(const std::string& pattern, bool transient = false);

    void set_fallback(std::string text);

    // The next `count` calls throw; transient failures are retriable.
    void fail_next(int count, bool transient = true);

    // Script file schema:
    //   {"exact": [{"system": "...", "user": "...", "response": "..."}],
    //    "rules": [{"pattern": "...", "response": "..."}],
    //    "fail_rules": ["pattern", ...],
    //    "fallback": "..."}
    static std::shared_ptr<MockBackend> from_script_file(const std::filesystem::path& file);

    std::vector<MockCall> calls() const;
    std::size_t call_count() const;
    void clear_calls();

private:
    struct Rule {
        std::string pattern;
        std::regex re;
        std::string response;
    };
    struct FailRule {
        std::string pattern;
        std::regex re;
        bool transient;
    };

    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, std::string> exact_;
    std::vector<Rule> rules_;
    std::vector<FailRule> fail_rules_;
    std::string fallback_;
    int fail_next_ = 0;
    bool fail_next_transient_ = true;
    std::vector<MockCall> calls_;
};

}  // namespace mixhal
