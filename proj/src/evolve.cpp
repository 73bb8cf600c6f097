#include "evolforge/evolve.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "evolforge/curate.hpp"
#include "evolforge/distill.hpp"
#include "evolforge/errors.hpp"
#include "evolforge/hashing.hpp"
#include "evolforge/rng.hpp"
#include "evolforge/templates.hpp"

namespace evolforge::evolve {

namespace {

constexpr std::string_view kPromptPreamble =
    "I want you to act as a prompt rewriter for programming tasks.\n";

constexpr std::string_view kPromptCoda =
    "The rewritten task must be self-contained and solvable.\n"
    "Output only the new instruction, with no commentary or headers.\n"
    "#Given Prompt#:\n{instruction}\n#Rewritten Prompt#:\n";

std::string_view operator_directive(OperatorId op) {
    switch (op) {
        case OperatorId::AddConstraints:
            return "Rewrite the given task into a strictly harder version by adding one "
                   "more constraint or requirement that the solution must honor.\n";
        case OperatorId::Deepen:
            return "Rewrite the given task into a strictly harder version by deepening "
                   "its contextual information: describe the surrounding system and the "
                   "conditions the solution must operate under.\n";
        case OperatorId::Concretize:
            return "Rewrite the given task into a strictly harder version by replacing "
                   "abstract or generic notions with concrete, specific ones.\n";
        case OperatorId::IncreaseReasoning:
            return "Rewrite the given task into a strictly harder version that requires "
                   "more chained reasoning steps to solve, not just a single direct "
                   "operation.\n";
        case OperatorId::ComplicateInput:
            return "Rewrite the given task into a strictly harder version by complicating "
                   "the input data: richer formats, nested structures, or extra fields "
                   "the solution must handle.\n";
        case OperatorId::Broaden:
            return "Create a brand-new programming task in the same domain as the given "
                   "one, of comparable difficulty, to broaden topical coverage. It must "
                   "not be a rewrite of the original.\n";
    }
    return {};
}

std::string template_file_name(OperatorId op) {
    return std::string("evolve_") + std::string(operator_name(op)) + ".txt";
}

const std::array<std::string_view, 3> kRefusalMarkers = {"sorry", "as an ai",
                                                         "cannot assist"};
const std::array<std::string_view, 3> kLeakMarkers = {"#given prompt#",
                                                      "#rewritten prompt#",
                                                      "rewritten prompt"};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view verdict_name(EvolutionVerdict v) {
    switch (v) {
        case EvolutionVerdict::Accepted: return "accepted";
        case EvolutionVerdict::RejectedNoGain: return "rejected_no_gain";
        case EvolutionVerdict::RejectedRefusal: return "rejected_refusal";
        case EvolutionVerdict::RejectedDegenerate: return "rejected_degenerate";
        case EvolutionVerdict::RejectedTemplateLeak: return "rejected_template_leak";
    }
    return "unknown";
}

nlohmann::json EvolutionTrace::to_json() const {
    return {
        {"parent_id", parent_id},
        {"operator", std::string(operator_name(op))},
        {"candidate_instruction", candidate_instruction},
        {"candidate_output", candidate_output},
        {"verdict", std::string(verdict_name(verdict))},
        {"round", round},
    };
}

std::string render_evolution_prompt(const InstructionPair& pair, OperatorId op,
                                    const std::string& template_dir) {
    std::string fallback = std::string(kPromptPreamble);
    fallback += operator_directive(op);
    fallback += kPromptCoda;
    std::string tmpl = template_or_default(template_dir, template_file_name(op), fallback);
    return substitute_placeholder(tmpl, "instruction", pair.instruction);
}

EvolutionVerdict eliminate(const InstructionPair& parent,
                           const std::string& candidate_instruction,
                           const std::string& candidate_output, const PipelineConfig& cfg) {
    const double j =
        curate::jaccard_text(parent.instruction, candidate_instruction, cfg.shingle_k);
    if (j >= cfg.similarity_threshold) return EvolutionVerdict::RejectedNoGain;

    const std::string head = lowercase(
        std::string_view(candidate_output).substr(0, std::min<size_t>(120, candidate_output.size())));
    for (auto marker : kRefusalMarkers) {
        if (head.find(marker) != std::string::npos) {
            return EvolutionVerdict::RejectedRefusal;
        }
    }

    if (count_tokens(candidate_instruction) < 3) {
        return EvolutionVerdict::RejectedDegenerate;
    }
    if (distill::extract_code_blocks(candidate_output).empty() &&
        count_tokens(candidate_output) < 20) {
        return EvolutionVerdict::RejectedDegenerate;
    }

    const std::string lowered = lowercase(candidate_instruction);
    for (auto marker : kLeakMarkers) {
        if (lowered.find(marker) != std::string::npos) {
            return EvolutionVerdict::RejectedTemplateLeak;
        }
    }
    return EvolutionVerdict::Accepted;
}

RoundResult evolve_round(const std::vector<InstructionPair>& input, int round,
                         gateway::Backend& backend, const PipelineConfig& cfg) {
    if (round < 1) throw ValidationError("evolution round must be >= 1");

    RoundResult result;
    std::unordered_set<std::string> used_ids;
    for (const auto& p : input) used_ids.insert(p.id);

    for (size_t idx = 0; idx < input.size(); ++idx) {
        const InstructionPair& parent = input[idx];

        // Seeded operator walk: a shuffled permutation so every retry uses a
        // fresh operator.
        std::array<OperatorId, kOperatorCount> order = {
            OperatorId::AddConstraints,   OperatorId::Deepen,
            OperatorId::Concretize,       OperatorId::IncreaseReasoning,
            OperatorId::ComplicateInput,  OperatorId::Broaden,
        };
        SeededRng rng(combine_hash(static_cast<std::uint64_t>(cfg.rng_seed),
                                   combine_hash(fnv1a64(parent.id),
                                                static_cast<std::uint64_t>(round))));
        for (int i = kOperatorCount - 1; i > 0; --i) {
            std::swap(order[i], order[rng.bounded(i + 1)]);
        }

        const int attempts = 1 + cfg.max_retries_per_pair;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            const OperatorId op = order[attempt % kOperatorCount];

            gateway::CompletionRequest rewrite_req;
            rewrite_req.prompt = render_evolution_prompt(parent, op, cfg.template_dir);
            rewrite_req.max_tokens = 1024;
            rewrite_req.temperature = 0.7;
            rewrite_req.top_p = 0.95;
            rewrite_req.request_seed = static_cast<std::int64_t>(combine_hash(
                static_cast<std::uint64_t>(cfg.rng_seed),
                combine_hash(fnv1a64(parent.id),
                             combine_hash(static_cast<std::uint64_t>(round),
                                          static_cast<std::uint64_t>(attempt)))));

            std::string candidate;
            try {
                auto resp = backend.complete(rewrite_req);
                if (resp.finish_reason != gateway::FinishReason::Error) {
                    candidate = canonicalize_text(resp.text);
                }
            } catch (const BackendError&) {
                // Recorded below as a degenerate attempt (empty candidate).
            }

            EvolutionTrace trace;
            trace.parent_id = parent.id;
            trace.op = op;
            trace.round = round;
            trace.candidate_instruction = candidate;

            // The response stage is skipped when the rewrite already failed
            // the no-gain screen; the verdict cannot change after it.
            const double j =
                curate::jaccard_text(parent.instruction, candidate, cfg.shingle_k);
            if (j >= cfg.similarity_threshold) {
                trace.verdict = EvolutionVerdict::RejectedNoGain;
                result.traces.push_back(std::move(trace));
                continue;
            }

            std::string output;
            if (!candidate.empty()) {
                gateway::CompletionRequest sol_req;
                sol_req.prompt = distill::build_solution_prompt(candidate, cfg.language,
                                                                cfg.template_dir);
                sol_req.max_tokens = 2048;
                sol_req.temperature = 0.2;
                sol_req.top_p = 0.95;
                sol_req.request_seed = static_cast<std::int64_t>(combine_hash(
                    static_cast<std::uint64_t>(cfg.rng_seed), fnv1a64(candidate)));
                try {
                    auto resp = backend.complete(sol_req);
                    if (resp.finish_reason != gateway::FinishReason::Error) {
                        output = resp.text;
                    }
                } catch (const BackendError&) {
                }
            }
            trace.candidate_output = output;
            trace.verdict = eliminate(parent, candidate, output, cfg);

            if (trace.verdict == EvolutionVerdict::Accepted) {
                InstructionPair evolved = InstructionPair::make(
                    candidate, "", output, Origin::evolved(round, op, parent.id));
                // Content-hash ids must stay unique across the pool; an exact
                // duplicate of an existing pair adds nothing.
                if (used_ids.insert(evolved.id).second) {
                    result.accepted.push_back(std::move(evolved));
                }
                result.traces.push_back(std::move(trace));
                break;
            }
            result.traces.push_back(std::move(trace));
        }
    }
    return result;
}

EvolveResult evolve(const Dataset& seeds, int rounds, gateway::Backend& backend,
                    const PipelineConfig& cfg) {
    if (rounds < 0) throw ValidationError("rounds must be >= 0");

    EvolveResult out;
    out.dataset.pairs = seeds.pairs;

    std::unordered_set<std::string> used_ids;
    for (const auto& p : seeds.pairs) used_ids.insert(p.id);

    nlohmann::json round_counts = nlohmann::json::array();
    std::vector<InstructionPair> frontier = seeds.pairs;

    for (int r = 1; r <= rounds; ++r) {
        RoundResult round_result = evolve_round(frontier, r, backend, cfg);

        std::vector<InstructionPair> added;
        added.reserve(round_result.accepted.size());
        for (auto& p : round_result.accepted) {
            if (used_ids.insert(p.id).second) {
                added.push_back(std::move(p));
            }
        }

        std::int64_t rejected = 0;
        for (const auto& t : round_result.traces) {
            if (t.verdict != EvolutionVerdict::Accepted) ++rejected;
        }
        round_counts.push_back({{"round", r},
                                {"attempts", round_result.traces.size()},
                                {"accepted", added.size()},
                                {"rejected", rejected}});

        for (auto& t : round_result.traces) out.traces.push_back(std::move(t));
        for (const auto& p : added) out.dataset.pairs.push_back(p);
        frontier = std::move(added);
    }

    if (!cfg.include_seeds_in_final) {
        std::vector<InstructionPair> evolved_only;
        for (auto& p : out.dataset.pairs) {
            if (p.origin.kind == Origin::Kind::Evolved) evolved_only.push_back(std::move(p));
        }
        out.dataset.pairs = std::move(evolved_only);
    }

    out.dataset.manifest.stage_name = "evolved";
    out.dataset.manifest.pair_count = static_cast<std::int64_t>(out.dataset.pairs.size());
    out.dataset.manifest.config_digest = cfg.digest();
    out.dataset.manifest.rng_seed = cfg.rng_seed;
    out.dataset.manifest.parent_manifest_digest = seeds.manifest.digest();
    out.dataset.manifest.extra = {{"rounds", round_counts},
                                  {"include_seeds", cfg.include_seeds_in_final}};
    return out;
}

}  // namespace evolforge::evolve
