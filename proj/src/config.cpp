#include "evolforge/config.hpp"

#include <fstream>

#include "evolforge/errors.hpp"
#include "evolforge/hashing.hpp"

namespace evolforge {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

}  // namespace

void BackendConfig::validate() const {
    if (endpoint_url.empty()) throw ValidationError("backend.endpoint_url is empty");
    if (timeout_ms <= 0) throw ValidationError("backend.timeout_ms must be > 0");
    if (max_retries < 0) throw ValidationError("backend.max_retries must be >= 0");
    if (backoff_base_ms <= 0) throw ValidationError("backend.backoff_base_ms must be > 0");
    if (max_in_flight < 1) throw ValidationError("backend.max_in_flight must be >= 1");
}

nlohmann::json BackendConfig::to_json() const {
    return {
        {"endpoint_url", endpoint_url}, {"model_name", model_name},
        {"auth_env_var", auth_env_var}, {"timeout_ms", timeout_ms},
        {"max_retries", max_retries},   {"backoff_base_ms", backoff_base_ms},
        {"max_in_flight", max_in_flight},
    };
}

BackendConfig BackendConfig::from_json(const nlohmann::json& j) {
    BackendConfig c;
    read_if(j, "endpoint_url", c.endpoint_url);
    read_if(j, "model_name", c.model_name);
    read_if(j, "auth_env_var", c.auth_env_var);
    read_if(j, "timeout_ms", c.timeout_ms);
    read_if(j, "max_retries", c.max_retries);
    read_if(j, "backoff_base_ms", c.backoff_base_ms);
    read_if(j, "max_in_flight", c.max_in_flight);
    return c;
}

void PipelineConfig::validate() const {
    if (seed_target <= 0) throw ValidationError("seed_target must be > 0");
    if (curated_target <= 0) throw ValidationError("curated_target must be > 0");
    if (curated_target > seed_target) {
        throw ValidationError("curated_target must be <= seed_target");
    }
    if (evolution_rounds < 0) throw ValidationError("evolution_rounds must be >= 0");
    if (similarity_threshold < 0.0 || similarity_threshold > 1.0) {
        throw ValidationError("similarity_threshold must be in [0,1]");
    }
    if (max_instruction_tokens <= 0) {
        throw ValidationError("max_instruction_tokens must be > 0");
    }
    if (questions_per_call <= 0) throw ValidationError("questions_per_call must be > 0");
    if (max_seed_calls < 0) throw ValidationError("max_seed_calls must be >= 0");
    if (shingle_k < 1) throw ValidationError("shingle_k must be >= 1");
    if (minhash_size < 1) throw ValidationError("minhash_size must be >= 1");
    if (lsh_band_rows < 1 || lsh_band_rows > minhash_size) {
        throw ValidationError("lsh_band_rows must be in [1, minhash_size]");
    }
    if (max_retries_per_pair < 0) throw ValidationError("max_retries_per_pair must be >= 0");
    backend.validate();
}

nlohmann::json PipelineConfig::to_json() const {
    return {
        {"seed_target", seed_target},
        {"curated_target", curated_target},
        {"evolution_rounds", evolution_rounds},
        {"similarity_threshold", similarity_threshold},
        {"max_instruction_tokens", max_instruction_tokens},
        {"rng_seed", rng_seed},
        {"backend", backend.to_json()},
        {"language", language},
        {"questions_per_call", questions_per_call},
        {"max_seed_calls", max_seed_calls},
        {"shingle_k", shingle_k},
        {"minhash_size", minhash_size},
        {"lsh_band_rows", lsh_band_rows},
        {"max_retries_per_pair", max_retries_per_pair},
        {"include_seeds_in_final", include_seeds_in_final},
        {"template_dir", template_dir},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig c;
    read_if(j, "seed_target", c.seed_target);
    read_if(j, "curated_target", c.curated_target);
    read_if(j, "evolution_rounds", c.evolution_rounds);
    read_if(j, "similarity_threshold", c.similarity_threshold);
    read_if(j, "max_instruction_tokens", c.max_instruction_tokens);
    read_if(j, "rng_seed", c.rng_seed);
    if (j.contains("backend")) c.backend = BackendConfig::from_json(j["backend"]);
    read_if(j, "language", c.language);
    read_if(j, "questions_per_call", c.questions_per_call);
    read_if(j, "max_seed_calls", c.max_seed_calls);
    read_if(j, "shingle_k", c.shingle_k);
    read_if(j, "minhash_size", c.minhash_size);
    read_if(j, "lsh_band_rows", c.lsh_band_rows);
    read_if(j, "max_retries_per_pair", c.max_retries_per_pair);
    read_if(j, "include_seeds_in_final", c.include_seeds_in_final);
    read_if(j, "template_dir", c.template_dir);
    return c;
}

PipelineConfig PipelineConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path + ": " + e.what());
    }
    return from_json(j);
}

std::string PipelineConfig::digest() const {
    nlohmann::json j = to_json();
    j.erase("backend");
    j.erase("template_dir");
    return digest128_hex(j.dump());
}

}  // namespace evolforge
