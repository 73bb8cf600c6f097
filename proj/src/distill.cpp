#include "evolforge/distill.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_set>

#include "evolforge/errors.hpp"
#include "evolforge/hashing.hpp"
#include "evolforge/templates.hpp"

namespace evolforge::distill {

namespace {

// Mirrors the distillation prompt that produced the seed pool.
constexpr std::string_view kSeedTemplate =
    "Write {count} programming interview questions of easy and medium complexity.\n"
    "Provide questions on a diverse range of subjects and make sure no two questions "
    "are alike.\n"
    "Be creative and think about a lot of different topics with different difficulties.\n"
    "The question needs to be specific to {language} language.\n"
    "Enumerate all the questions.\n";

constexpr std::string_view kSolutionTemplate =
    "Solve the following task in {language}. Provide complete, compilable code.\n"
    "\n"
    "{problem}\n";

// Returns the enumerated-item payload when the line starts with "N.", "N)"
// or "- ", otherwise nullopt.
std::optional<std::string_view> strip_enumeration_marker(std::string_view line) {
    size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t digits = i;
    while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
    if (digits > i && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
        size_t body = digits + 1;
        while (body < line.size() && (line[body] == ' ' || line[body] == '\t')) ++body;
        return line.substr(body);
    }
    if (i < line.size() && line[i] == '-' && i + 1 < line.size() &&
        (line[i + 1] == ' ' || line[i + 1] == '\t')) {
        size_t body = i + 2;
        while (body < line.size() && (line[body] == ' ' || line[body] == '\t')) ++body;
        return line.substr(body);
    }
    return std::nullopt;
}

std::string_view rtrim(std::string_view s) {
    size_t e = s.size();
    while (e > 0 && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(0, e);
}

}  // namespace

std::string build_seed_prompt(int question_count, const std::string& language,
                              const std::string& template_dir) {
    if (question_count <= 0) throw ValidationError("question_count must be > 0");
    std::string tmpl = template_or_default(template_dir, "seed_prompt.txt", kSeedTemplate);
    tmpl = substitute_placeholder(tmpl, "count", std::to_string(question_count));
    return substitute_placeholder(tmpl, "language", language);
}

std::vector<std::string> parse_enumerated_questions(std::string_view raw) {
    std::vector<std::string> items;
    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line =
            raw.substr(pos, eol == std::string_view::npos ? raw.size() - pos : eol - pos);
        if (auto body = strip_enumeration_marker(line)) {
            std::string item(rtrim(*body));
            if (count_tokens(item) >= 3) items.push_back(std::move(item));
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return items;
}

std::vector<CodeBlock> extract_code_blocks(std::string_view text) {
    std::vector<CodeBlock> blocks;
    size_t pos = 0;
    bool inside = false;
    CodeBlock current;
    size_t body_start = 0;

    while (pos < text.size()) {
        size_t fence = text.find("```", pos);
        if (fence == std::string_view::npos) break;
        if (!inside) {
            size_t tag_start = fence + 3;
            size_t eol = text.find('\n', tag_start);
            if (eol == std::string_view::npos) {
                // Opening fence with nothing after it.
                current = {};
                current.lang_tag = std::string(rtrim(text.substr(tag_start)));
                body_start = text.size();
                inside = true;
                pos = text.size();
                break;
            }
            current = {};
            current.lang_tag = std::string(rtrim(text.substr(tag_start, eol - tag_start)));
            body_start = eol + 1;
            inside = true;
            pos = eol + 1;
        } else {
            current.code = std::string(text.substr(body_start, fence - body_start));
            blocks.push_back(std::move(current));
            inside = false;
            size_t eol = text.find('\n', fence + 3);
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
        }
    }
    if (inside) {
        current.code = std::string(text.substr(body_start));
        blocks.push_back(std::move(current));
    }
    return blocks;
}

SeedBatch distill_seeds(const PipelineConfig& cfg, gateway::Backend& backend) {
    cfg.validate();

    SeedBatch batch;
    batch.requested = cfg.seed_target;

    const int min_calls = static_cast<int>(
        (cfg.seed_target + cfg.questions_per_call - 1) / cfg.questions_per_call);
    const int max_calls = cfg.max_seed_calls > 0 ? cfg.max_seed_calls : 4 * min_calls;

    const std::string prompt =
        build_seed_prompt(cfg.questions_per_call, cfg.language, cfg.template_dir);
    std::unordered_set<std::string> seen_ids;

    for (int call = 0; call < max_calls; ++call) {
        if (static_cast<std::int64_t>(batch.problems.size()) >= cfg.seed_target) break;

        gateway::CompletionRequest req;
        req.prompt = prompt;
        req.max_tokens = 64 * cfg.questions_per_call;
        req.temperature = 1.0;
        req.top_p = 0.95;
        req.request_seed = static_cast<std::int64_t>(
            combine_hash(static_cast<std::uint64_t>(cfg.rng_seed),
                         combine_hash(0xd157111ULL, static_cast<std::uint64_t>(call))));

        gateway::CompletionResponse resp = backend.complete(req);
        batch.raw_responses.push_back(resp.text);
        if (resp.finish_reason == gateway::FinishReason::Error) continue;

        for (auto& q : parse_enumerated_questions(resp.text)) {
            if (static_cast<std::int64_t>(batch.problems.size()) >= cfg.seed_target) break;
            InstructionPair pair = InstructionPair::make(std::move(q), "", "");
            // Identical questions across calls collapse to the first copy.
            if (!seen_ids.insert(pair.id).second) continue;
            batch.problems.push_back(std::move(pair));
        }
    }

    batch.obtained = static_cast<std::int64_t>(batch.problems.size());
    if (batch.obtained < cfg.seed_target) {
        throw TargetUnreachable("collected " + std::to_string(batch.obtained) +
                                " seed problems after " + std::to_string(max_calls) +
                                " calls, target " + std::to_string(cfg.seed_target));
    }
    return batch;
}

std::string build_solution_prompt(const std::string& problem, const std::string& language,
                                  const std::string& template_dir) {
    std::string tmpl =
        template_or_default(template_dir, "solution_prompt.txt", kSolutionTemplate);
    tmpl = substitute_placeholder(tmpl, "language", language);
    return substitute_placeholder(tmpl, "problem", problem);
}

SolutionOutcome generate_solutions(const std::vector<InstructionPair>& problems,
                                   gateway::Backend& backend, const PipelineConfig& cfg) {
    for (const auto& p : problems) {
        if (!p.output.empty()) {
            throw ValidationError("pair " + p.id + " already has a solution");
        }
    }

    std::vector<gateway::CompletionRequest> reqs;
    reqs.reserve(problems.size());
    for (const auto& p : problems) {
        gateway::CompletionRequest req;
        req.prompt = build_solution_prompt(p.instruction, cfg.language, cfg.template_dir);
        req.max_tokens = 2048;
        req.temperature = 0.2;
        req.top_p = 0.95;
        req.request_seed = static_cast<std::int64_t>(
            combine_hash(static_cast<std::uint64_t>(cfg.rng_seed), fnv1a64(p.id)));
        reqs.push_back(std::move(req));
    }

    auto responses = gateway::complete_batch(backend, reqs, cfg.backend.max_in_flight);

    SolutionOutcome out;
    for (size_t i = 0; i < problems.size(); ++i) {
        const auto& resp = responses[i];
        if (resp.finish_reason == gateway::FinishReason::Error) {
            out.dropped.push_back({problems[i].id, "backend_error"});
            continue;
        }
        if (extract_code_blocks(resp.text).empty()) {
            out.dropped.push_back({problems[i].id, "no_code_block"});
            continue;
        }
        InstructionPair solved = problems[i];
        solved.output = resp.text;
        solved.rehash();
        out.solved.push_back(std::move(solved));
    }
    return out;
}

}  // namespace evolforge::distill
