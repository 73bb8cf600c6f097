#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evolforge/config.hpp"
#include "evolforge/core.hpp"
#include "evolforge/gateway.hpp"

namespace evolforge::evolve {

enum class EvolutionVerdict {
    Accepted,
    RejectedNoGain,
    RejectedRefusal,
    RejectedDegenerate,
    RejectedTemplateLeak,
};

std::string_view verdict_name(EvolutionVerdict v);

struct EvolutionTrace {
    std::string parent_id;
    OperatorId op = OperatorId::AddConstraints;
    std::string candidate_instruction;
    std::string candidate_output;
    EvolutionVerdict verdict = EvolutionVerdict::Accepted;
    int round = 1;

    nlohmann::json to_json() const;
};

// Fills the operator's rewrite template with the parent instruction. The
// five in-depth operators each demand a strictly harder rewrite; Broaden
// asks for a new same-domain task of comparable difficulty.
std::string render_evolution_prompt(const InstructionPair& pair, OperatorId op,
                                    const std::string& template_dir = {});

// Screens one evolution candidate. Checks run in fixed order and the first
// failure wins: NoGain (parent/candidate Jaccard at or above the threshold),
// Refusal (marker inside the first 120 chars of the output), Degenerate
// (instruction under 3 tokens, or codeless output under 20 tokens),
// TemplateLeak (prompt scaffolding echoed into the candidate).
EvolutionVerdict eliminate(const InstructionPair& parent,
                           const std::string& candidate_instruction,
                           const std::string& candidate_output, const PipelineConfig& cfg);

struct RoundResult {
    std::vector<EvolutionTrace> traces;      // one per attempt
    std::vector<InstructionPair> accepted;   // origin=Evolved, this round
};

// Evolves every pair of `input` once: seeded operator choice, rewrite,
// solution, elimination; rejected attempts retry with a fresh operator up to
// cfg.max_retries_per_pair times.
RoundResult evolve_round(const std::vector<InstructionPair>& input, int round,
                         gateway::Backend& backend, const PipelineConfig& cfg);

struct EvolveResult {
    Dataset dataset;
    std::vector<EvolutionTrace> traces;
};

// Chained multi-round evolution: round r evolves round r-1's accepted pairs
// (round 1 evolves the seeds). The final dataset is seeds plus all accepted
// pairs in round order; with include_seeds_in_final=false the seeds are
// omitted.
EvolveResult evolve(const Dataset& seeds, int rounds, gateway::Backend& backend,
                    const PipelineConfig& cfg);

}  // namespace evolforge::evolve
