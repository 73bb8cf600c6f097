#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "evolforge/config.hpp"

namespace evolforge::gateway {

enum class FinishReason { Stop, Length, Error };

std::string_view finish_reason_name(FinishReason r);

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 1024;
    double temperature = 0.0;
    double top_p = 1.0;
    std::vector<std::string> stop;  // at most 4
    std::int64_t request_seed = 0;

    void validate() const;
    nlohmann::json to_wire_json(const std::string& model_name) const;
};

struct CompletionResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::Stop;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    int latency_ms = 0;
};

// A completion source. Implementations must be safe to call from multiple
// threads at once; complete_batch relies on that.
class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& req) = 0;
};

// JSON-over-HTTP client for completions-style endpoints.
// Request body:  {"model","prompt","max_tokens","temperature","top_p","stop","seed"}
// Response body: {"choices":[{"text","finish_reason"}],
//                 "usage":{"prompt_tokens","completion_tokens"}}
//
// Transport failures and 5xx responses are retried up to max_retries times
// with exponential backoff (backoff_base_ms * 2^attempt); 4xx responses are
// surfaced as RequestRejected without retrying.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig cfg);
    CompletionResponse complete(const CompletionRequest& req) override;

    const BackendConfig& config() const { return cfg_; }

private:
    BackendConfig cfg_;
    std::string scheme_host_port_;
    std::string path_;
};

// Runs all requests through `backend` with at most `max_in_flight`
// concurrently outstanding. The result is positionally aligned with `reqs`;
// a request that throws is recorded as finish_reason=Error with the message
// in `text` left empty, never aborting the batch.
std::vector<CompletionResponse> complete_batch(Backend& backend,
                                               std::span<const CompletionRequest> reqs,
                                               int max_in_flight);

}  // namespace evolforge::gateway
