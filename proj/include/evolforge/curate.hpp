#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "evolforge/config.hpp"
#include "evolforge/core.hpp"

namespace evolforge::curate {

struct MinHashParams {
    int signature_size = 128;
    int shingle_k = 3;
    std::uint64_t hash_seed = 0;

    bool operator==(const MinHashParams&) const = default;
};

struct MinHashSignature {
    std::vector<std::uint64_t> values;
    MinHashParams params;
};

// Set of k-grams over tokenize(text). Texts with fewer than k tokens yield a
// singleton set holding the whole token list; empty text yields the sentinel
// shingle.
std::unordered_set<std::string> shingles(std::string_view text, int k);

// |a∩b| / |a∪b|; 1.0 when both sets are empty.
double jaccard(const std::unordered_set<std::string>& a,
               const std::unordered_set<std::string>& b);

double jaccard_text(std::string_view a, std::string_view b, int k);

MinHashSignature minhash(std::string_view text, const MinHashParams& params);

// Fraction of matching signature slots; estimates Jaccard similarity.
double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b);

struct DropRecord {
    std::string id;
    std::string reason;  // "similar", "verbose", "short"
    std::string evidence;

    nlohmann::json to_json() const;
};

struct CurationReport {
    std::int64_t input_count = 0;
    std::int64_t kept_count = 0;
    std::int64_t dropped_similar = 0;
    std::int64_t dropped_verbose = 0;
    std::int64_t dropped_short = 0;
    std::vector<DropRecord> drop_records;

    bool balanced() const {
        return input_count == kept_count + dropped_similar + dropped_verbose + dropped_short;
    }
    nlohmann::json to_json() const;
};

struct DedupResult {
    std::vector<InstructionPair> kept;
    std::vector<InstructionPair> dropped;
    std::vector<DropRecord> records;
};

// Single pass in input order: a pair is dropped when its similarity to an
// already-kept pair reaches `threshold`. Candidates come from LSH banding
// over MinHash signatures and are confirmed with exact Jaccard before a drop
// happens, so the kept set matches a brute-force exact-Jaccard sweep.
DedupResult dedup_near(const std::vector<InstructionPair>& problems, double threshold,
                       const MinHashParams& params, int band_rows);

struct FilterResult {
    std::vector<InstructionPair> kept;
    std::vector<InstructionPair> dropped;
    std::vector<DropRecord> records;
};

// Drops pairs whose instruction alone exceeds `max_tokens` tokens.
FilterResult verbosity_filter(const std::vector<InstructionPair>& problems, int max_tokens);

struct CurateResult {
    Dataset dataset;
    CurationReport report;
};

// Verbosity filter, then near-dedup, then truncation to curated_target.
// Throws InsufficientSurvivors when fewer than curated_target pairs remain.
CurateResult curate(const std::vector<InstructionPair>& problems, const PipelineConfig& cfg,
                    const std::optional<std::string>& parent_manifest_digest);

}  // namespace evolforge::curate
