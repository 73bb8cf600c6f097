#pragma once

#include <string>
#include <vector>

#include "evolforge/config.hpp"
#include "evolforge/core.hpp"
#include "evolforge/gateway.hpp"

namespace evolforge::distill {

struct SeedBatch {
    std::vector<std::string> raw_responses;
    std::vector<InstructionPair> problems;  // origin=Seed, output empty
    std::int64_t requested = 0;
    std::int64_t obtained = 0;
};

// The teacher prompt used to synthesize the seed pool, with the question
// count and target language substituted in.
std::string build_seed_prompt(int question_count, const std::string& language,
                              const std::string& template_dir = {});

// Pulls enumerated items ("1.", "2)", "-") out of a raw model response.
// Markers and surrounding whitespace are stripped; items under 3 tokens are
// discarded; source order is preserved.
std::vector<std::string> parse_enumerated_questions(std::string_view raw);

struct CodeBlock {
    std::string lang_tag;
    std::string code;
};

// All triple-backtick fenced blocks, in order. Fences toggle: an unterminated
// final fence yields a block running to the end of the text.
std::vector<CodeBlock> extract_code_blocks(std::string_view text);

// Calls the seed prompt in batches of cfg.questions_per_call until
// seed_target problems accumulate (exact duplicates are folded), truncating
// overshoot. Throws TargetUnreachable when the call cap is exhausted first.
SeedBatch distill_seeds(const PipelineConfig& cfg, gateway::Backend& backend);

std::string build_solution_prompt(const std::string& problem, const std::string& language,
                                  const std::string& template_dir = {});

struct SolutionDrop {
    std::string id;
    std::string reason;
};

struct SolutionOutcome {
    std::vector<InstructionPair> solved;
    std::vector<SolutionDrop> dropped;
};

// Requests a solution for every problem and stores the full response text as
// the pair output. Problems whose response carries no code block (refusals,
// prose-only answers, backend errors) are dropped; survivor order matches
// input order.
SolutionOutcome generate_solutions(const std::vector<InstructionPair>& problems,
                                   gateway::Backend& backend, const PipelineConfig& cfg);

}  // namespace evolforge::distill
