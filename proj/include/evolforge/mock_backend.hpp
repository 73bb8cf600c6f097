#pragma once

#include <cstdint>
#include <string>

#include "evolforge/gateway.hpp"

namespace evolforge::gateway {

// Scripted fault injection for pipeline tests. Rates are applied as a
// deterministic function of the prompt, so two runs with the same seed see
// the same faults on the same items.
struct MockOptions {
    double refusal_rate = 0.0;      // applied to solution prompts
    double parent_copy_rate = 0.0;  // applied to evolution prompts
};

// Offline stand-in for the teacher model. Every response is a pure function
// of (hash(prompt), request_seed, seed). Recognized prompt families:
//   - "programming interview questions"  -> enumerated question list
//   - "#Given Prompt#" scaffolding       -> instruction rewrite
//   - "Solve the following task"         -> prose + fenced code solution
//   - kRefusalTrigger anywhere in prompt -> refusal text
class MockBackend : public Backend {
public:
    explicit MockBackend(std::int64_t seed, MockOptions options = {});

    CompletionResponse complete(const CompletionRequest& req) override;

    // Marker that forces a refusal response regardless of prompt family.
    static constexpr const char* kRefusalTrigger = "[refusal-trigger]";
    static constexpr const char* kRefusalText =
        "I'm sorry, but as an AI language model I cannot assist with that request.";

private:
    std::string render(const CompletionRequest& req) const;
    std::string question_list(const std::string& prompt, std::uint64_t salt) const;
    std::string solution(const std::string& prompt, std::uint64_t salt) const;
    std::string evolution_rewrite(const std::string& prompt, std::uint64_t salt) const;

    std::int64_t seed_;
    MockOptions options_;
};

}  // namespace evolforge::gateway
