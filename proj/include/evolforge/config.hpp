#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace evolforge {

struct BackendConfig {
    std::string endpoint_url = "http://127.0.0.1:8000/v1/completions";
    std::string model_name = "codellama-34b";
    std::string auth_env_var;  // empty -> no credential sent
    int timeout_ms = 60000;
    int max_retries = 2;
    int backoff_base_ms = 250;
    int max_in_flight = 4;

    void validate() const;
    nlohmann::json to_json() const;
    static BackendConfig from_json(const nlohmann::json& j);
};

struct PipelineConfig {
    std::int64_t seed_target = 100000;
    std::int64_t curated_target = 4000;
    int evolution_rounds = 3;
    double similarity_threshold = 0.7;
    int max_instruction_tokens = 1024;
    std::int64_t rng_seed = 0;
    BackendConfig backend;

    std::string language = "csharp";
    int questions_per_call = 1000;
    // 0 -> derived: 4x the minimum number of calls needed for seed_target.
    int max_seed_calls = 0;
    int shingle_k = 3;
    int minhash_size = 128;
    int lsh_band_rows = 4;
    int max_retries_per_pair = 2;
    // When false, the final evolved dataset holds only evolved pairs.
    bool include_seeds_in_final = true;
    std::string template_dir;  // overrides the embedded prompt templates

    void validate() const;
    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
    static PipelineConfig load_file(const std::string& path);

    // Stable digest of the effective configuration (backend endpoint and
    // credential names excluded so runs against different hosts still chain).
    std::string digest() const;
};

}  // namespace evolforge
