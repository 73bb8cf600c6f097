#include "evolforge/curate.hpp"

#include <algorithm>
#include <unordered_map>

#include "evolforge/errors.hpp"
#include "evolforge/hashing.hpp"

namespace evolforge::curate {

namespace {

// Token separator inside a shingle; never produced by tokenize().
constexpr char kGlue = '\x1f';
constexpr const char* kEmptySentinel = "\x1e<empty>";

std::string join_tokens(const std::vector<std::string>& tokens, size_t begin, size_t end) {
    std::string s;
    for (size_t i = begin; i < end; ++i) {
        if (i > begin) s.push_back(kGlue);
        s += tokens[i];
    }
    return s;
}

}  // namespace

std::unordered_set<std::string> shingles(std::string_view text, int k) {
    if (k < 1) throw ValidationError("shingle k must be >= 1");
    std::vector<std::string> tokens = tokenize(text);
    std::unordered_set<std::string> out;
    if (tokens.empty()) {
        out.insert(kEmptySentinel);
        return out;
    }
    if (tokens.size() < static_cast<size_t>(k)) {
        out.insert(join_tokens(tokens, 0, tokens.size()));
        return out;
    }
    for (size_t i = 0; i + k <= tokens.size(); ++i) {
        out.insert(join_tokens(tokens, i, i + k));
    }
    return out;
}

double jaccard(const std::unordered_set<std::string>& a,
               const std::unordered_set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    size_t inter = 0;
    for (const auto& s : small) {
        if (large.count(s)) ++inter;
    }
    const size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_text(std::string_view a, std::string_view b, int k) {
    return jaccard(shingles(a, k), shingles(b, k));
}

MinHashSignature minhash(std::string_view text, const MinHashParams& params) {
    if (params.signature_size < 1) throw ValidationError("signature_size must be >= 1");
    auto set = shingles(text, params.shingle_k);

    MinHashSignature sig;
    sig.params = params;
    sig.values.assign(params.signature_size, ~0ULL);
    for (const auto& s : set) {
        const std::uint64_t base = fnv1a64(s);
        for (int i = 0; i < params.signature_size; ++i) {
            const std::uint64_t slot_seed =
                mix64(params.hash_seed + 0x9e3779b97f4a7c15ULL * (i + 1));
            const std::uint64_t h = mix64(base ^ slot_seed);
            if (h < sig.values[i]) sig.values[i] = h;
        }
    }
    return sig;
}

double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b) {
    if (!(a.params == b.params)) {
        throw ValidationError("minhash signatures computed with different parameters");
    }
    if (a.values.empty()) return 0.0;
    size_t match = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        if (a.values[i] == b.values[i]) ++match;
    }
    return static_cast<double>(match) / static_cast<double>(a.values.size());
}

nlohmann::json DropRecord::to_json() const {
    return {{"id", id}, {"reason", reason}, {"evidence", evidence}};
}

nlohmann::json CurationReport::to_json() const {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : drop_records) records.push_back(r.to_json());
    return {
        {"input_count", input_count},       {"kept_count", kept_count},
        {"dropped_similar", dropped_similar}, {"dropped_verbose", dropped_verbose},
        {"dropped_short", dropped_short},   {"drop_records", records},
    };
}

DedupResult dedup_near(const std::vector<InstructionPair>& problems, double threshold,
                       const MinHashParams& params, int band_rows) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw ValidationError("dedup threshold must be in [0,1]");
    }
    if (band_rows < 1 || band_rows > params.signature_size) {
        throw ValidationError("band_rows must be in [1, signature_size]");
    }

    DedupResult result;
    const int bands = params.signature_size / band_rows;

    struct KeptEntry {
        size_t kept_index;
        std::unordered_set<std::string> shingle_set;
    };
    std::vector<KeptEntry> kept_entries;
    // band hash -> indices into kept_entries
    std::unordered_map<std::uint64_t, std::vector<size_t>> buckets;

    for (const auto& p : problems) {
        const MinHashSignature sig = minhash(p.instruction, params);
        std::vector<std::uint64_t> band_keys(bands);
        for (int b = 0; b < bands; ++b) {
            std::uint64_t h = mix64(0xb4bd5 + b);
            for (int r = 0; r < band_rows; ++r) {
                h = combine_hash(h, sig.values[b * band_rows + r]);
            }
            // Disambiguate identical row patterns across bands.
            band_keys[b] = combine_hash(h, static_cast<std::uint64_t>(b));
        }

        auto shingle_set = shingles(p.instruction, params.shingle_k);
        bool dropped = false;
        std::unordered_set<size_t> candidates;
        for (const auto key : band_keys) {
            auto it = buckets.find(key);
            if (it == buckets.end()) continue;
            for (size_t idx : it->second) candidates.insert(idx);
        }
        // Confirm with exact Jaccard; the signature only nominates.
        std::vector<size_t> ordered(candidates.begin(), candidates.end());
        std::sort(ordered.begin(), ordered.end());
        for (size_t idx : ordered) {
            const double j = jaccard(shingle_set, kept_entries[idx].shingle_set);
            if (j >= threshold) {
                DropRecord rec;
                rec.id = p.id;
                rec.reason = "similar";
                rec.evidence = "jaccard " + std::to_string(j) + " with kept pair " +
                               result.kept[kept_entries[idx].kept_index].id;
                result.records.push_back(std::move(rec));
                result.dropped.push_back(p);
                dropped = true;
                break;
            }
        }
        if (dropped) continue;

        const size_t entry_idx = kept_entries.size();
        result.kept.push_back(p);
        kept_entries.push_back({result.kept.size() - 1, std::move(shingle_set)});
        for (const auto key : band_keys) {
            buckets[key].push_back(entry_idx);
        }
    }
    return result;
}

FilterResult verbosity_filter(const std::vector<InstructionPair>& problems, int max_tokens) {
    if (max_tokens <= 0) throw ValidationError("max_tokens must be > 0");
    FilterResult result;
    for (const auto& p : problems) {
        const int n = count_tokens(p.instruction);
        if (n > max_tokens) {
            DropRecord rec;
            rec.id = p.id;
            rec.reason = "verbose";
            rec.evidence = std::to_string(n) + " instruction tokens > " +
                           std::to_string(max_tokens);
            result.records.push_back(std::move(rec));
            result.dropped.push_back(p);
        } else {
            result.kept.push_back(p);
        }
    }
    return result;
}

CurateResult curate(const std::vector<InstructionPair>& problems, const PipelineConfig& cfg,
                    const std::optional<std::string>& parent_manifest_digest) {
    if (problems.empty()) throw ValidationError("curate input is empty");
    cfg.validate();

    CurateResult out;
    out.report.input_count = static_cast<std::int64_t>(problems.size());

    // Degenerate instructions first: anything under 3 tokens carries no task.
    std::vector<InstructionPair> long_enough;
    long_enough.reserve(problems.size());
    for (const auto& p : problems) {
        if (count_tokens(p.instruction) < 3) {
            DropRecord rec;
            rec.id = p.id;
            rec.reason = "short";
            rec.evidence = "instruction has fewer than 3 tokens";
            out.report.drop_records.push_back(std::move(rec));
            ++out.report.dropped_short;
        } else {
            long_enough.push_back(p);
        }
    }

    FilterResult verb = verbosity_filter(long_enough, cfg.max_instruction_tokens);
    out.report.dropped_verbose = static_cast<std::int64_t>(verb.dropped.size());
    for (auto& r : verb.records) out.report.drop_records.push_back(std::move(r));

    MinHashParams params{cfg.minhash_size, cfg.shingle_k,
                         static_cast<std::uint64_t>(cfg.rng_seed)};
    DedupResult dedup =
        dedup_near(verb.kept, cfg.similarity_threshold, params, cfg.lsh_band_rows);
    out.report.dropped_similar = static_cast<std::int64_t>(dedup.dropped.size());
    for (auto& r : dedup.records) out.report.drop_records.push_back(std::move(r));

    std::vector<InstructionPair> survivors = std::move(dedup.kept);
    // kept_count reports curation survivors; the target cap below is a size
    // decision, not a quality drop, so it stays out of the drop buckets.
    out.report.kept_count = static_cast<std::int64_t>(survivors.size());
    if (static_cast<std::int64_t>(survivors.size()) < cfg.curated_target) {
        throw InsufficientSurvivors(
            "curation left " + std::to_string(survivors.size()) + " pairs, need " +
            std::to_string(cfg.curated_target));
    }
    const std::int64_t survivor_count = static_cast<std::int64_t>(survivors.size());
    if (survivor_count > cfg.curated_target) {
        survivors.resize(cfg.curated_target);  // earliest-seen pairs win
    }

    out.dataset.pairs = std::move(survivors);
    out.dataset.manifest.stage_name = "curated";
    out.dataset.manifest.pair_count = static_cast<std::int64_t>(out.dataset.pairs.size());
    out.dataset.manifest.config_digest = cfg.digest();
    out.dataset.manifest.rng_seed = cfg.rng_seed;
    out.dataset.manifest.parent_manifest_digest = parent_manifest_digest;
    out.dataset.manifest.extra = {
        {"similarity_threshold", cfg.similarity_threshold},
        {"max_instruction_tokens", cfg.max_instruction_tokens},
        {"shingle_k", cfg.shingle_k},
        {"minhash_size", cfg.minhash_size},
        {"survivors", survivor_count},
    };
    return out;
}

}  // namespace evolforge::curate
