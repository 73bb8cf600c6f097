#include "evolforge/gateway.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "evolforge/errors.hpp"

namespace evolforge::gateway {

namespace {

struct ParsedUrl {
    std::string scheme_host_port;
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("endpoint_url must include a scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

FinishReason finish_reason_from_wire(const std::string& s) {
    if (s == "length") return FinishReason::Length;
    if (s == "error") return FinishReason::Error;
    return FinishReason::Stop;
}

}  // namespace

std::string_view finish_reason_name(FinishReason r) {
    switch (r) {
        case FinishReason::Stop: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "stop";
}

void CompletionRequest::validate() const {
    if (prompt.empty()) throw ValidationError("completion request prompt is empty");
    if (max_tokens < 1) throw ValidationError("max_tokens must be >= 1");
    if (temperature < 0.0) throw ValidationError("temperature must be >= 0");
    if (top_p <= 0.0 || top_p > 1.0) throw ValidationError("top_p must be in (0,1]");
    if (stop.size() > 4) throw ValidationError("at most 4 stop strings are allowed");
}

nlohmann::json CompletionRequest::to_wire_json(const std::string& model_name) const {
    return {
        {"model", model_name},   {"prompt", prompt}, {"max_tokens", max_tokens},
        {"temperature", temperature}, {"top_p", top_p},   {"stop", stop},
        {"seed", request_seed},
    };
}

HttpBackend::HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    auto parsed = parse_url(cfg_.endpoint_url);
    scheme_host_port_ = parsed.scheme_host_port;
    path_ = parsed.path;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& req) {
    req.validate();

    httplib::Headers headers;
    if (!cfg_.auth_env_var.empty()) {
        const char* cred = std::getenv(cfg_.auth_env_var.c_str());
        if (cred == nullptr) {
            throw AuthMissing("credential environment variable not set: " +
                              cfg_.auth_env_var);
        }
        headers.emplace("Authorization", std::string("Bearer ") + cred);
    }

    const std::string body = req.to_wire_json(cfg_.model_name).dump();
    std::string last_error;

    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                static_cast<std::int64_t>(cfg_.backoff_base_ms) << (attempt - 1)));
        }

        auto start = std::chrono::steady_clock::now();
        // One client per call: httplib clients are not safe for concurrent
        // requests and complete() must be callable from the batch pool.
        httplib::Client client(scheme_host_port_);
        client.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
        client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000LL);
        client.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000LL);

        auto result = client.Post(path_, headers, body, "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();

        if (!result) {
            last_error = httplib::to_string(result.error());
            continue;  // transport failure -> retry
        }
        if (result->status >= 500) {
            last_error = "server returned status " + std::to_string(result->status);
            continue;
        }
        if (result->status >= 400) {
            throw RequestRejected("backend rejected request with status " +
                                  std::to_string(result->status) + ": " + result->body);
        }

        nlohmann::json j = nlohmann::json::parse(result->body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() ||
            j["choices"].empty() || !j["choices"][0].contains("text")) {
            throw MalformedResponse("response does not match wire schema: " +
                                    result->body.substr(0, 256));
        }

        CompletionResponse resp;
        resp.text = j["choices"][0]["text"].get<std::string>();
        if (j["choices"][0].contains("finish_reason") &&
            j["choices"][0]["finish_reason"].is_string()) {
            resp.finish_reason =
                finish_reason_from_wire(j["choices"][0]["finish_reason"].get<std::string>());
        }
        if (j.contains("usage")) {
            const auto& u = j["usage"];
            if (u.contains("prompt_tokens")) resp.prompt_tokens = u["prompt_tokens"].get<int>();
            if (u.contains("completion_tokens")) {
                resp.completion_tokens = u["completion_tokens"].get<int>();
            }
        }
        resp.latency_ms = static_cast<int>(elapsed);
        return resp;
    }

    throw BackendUnavailable("retries exhausted against " + cfg_.endpoint_url + ": " +
                             last_error);
}

std::vector<CompletionResponse> complete_batch(Backend& backend,
                                               std::span<const CompletionRequest> reqs,
                                               int max_in_flight) {
    std::vector<CompletionResponse> out(reqs.size());
    if (reqs.empty()) return out;
    if (max_in_flight < 1) max_in_flight = 1;

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= reqs.size()) return;
            try {
                out[i] = backend.complete(reqs[i]);
            } catch (...) {
                CompletionResponse err;
                err.finish_reason = FinishReason::Error;
                out[i] = std::move(err);
            }
        }
    };

    const int workers =
        static_cast<int>(std::min<size_t>(reqs.size(), static_cast<size_t>(max_in_flight)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace evolforge::gateway
