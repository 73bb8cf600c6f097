#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace evolforge {

// Deterministic whitespace-free segmentation: maximal runs of letters
// (plus '_' and non-ASCII bytes), maximal runs of digits, and single
// punctuation characters. The same rule backs token counts, shingling and
// verbosity filtering everywhere, so counts are recomputable without any
// model tokenizer.
std::vector<std::string> tokenize(std::string_view text);

int count_tokens(std::string_view text);

// Trims outer whitespace and normalizes \r\n and \r to \n.
std::string canonicalize_text(std::string_view text);

// Content-addressed id: 128-bit hex digest over the canonicalized
// (instruction, input, output) triple. Throws EmptyInstruction when the
// instruction is blank after trimming.
std::string content_id(std::string_view instruction, std::string_view input,
                       std::string_view output);

enum class OperatorId {
    AddConstraints,
    Deepen,
    Concretize,
    IncreaseReasoning,
    ComplicateInput,
    Broaden,
};

inline constexpr int kOperatorCount = 6;

// Broaden is the single in-breadth operator; the rest are in-depth.
bool is_in_breadth(OperatorId op);
std::string_view operator_name(OperatorId op);
std::optional<OperatorId> operator_from_name(std::string_view name);

struct Origin {
    enum class Kind { Seed, Evolved };

    Kind kind = Kind::Seed;
    int round = 0;  // seeds are round 0
    OperatorId op = OperatorId::AddConstraints;
    std::string parent_id;

    static Origin seed() { return {}; }
    static Origin evolved(int round, OperatorId op, std::string parent_id);
};

struct InstructionPair {
    std::string id;
    std::string instruction;
    std::string input;
    std::string output;
    Origin origin;
    int token_count = 0;

    // Builds a pair with id and token_count derived from content.
    static InstructionPair make(std::string instruction, std::string input,
                                std::string output, Origin origin = Origin::seed());

    // Recomputes id and token_count after a field changed.
    void rehash();
};

struct Manifest {
    std::string stage_name;
    std::int64_t pair_count = 0;
    std::string config_digest;
    std::int64_t rng_seed = 0;
    std::optional<std::string> parent_manifest_digest;
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& j);

    // Digest of the serialized manifest; used to chain stages.
    std::string digest() const;
};

struct Dataset {
    std::vector<InstructionPair> pairs;
    Manifest manifest;

    // Checks count consistency, id uniqueness and parent resolution.
    // Throws ValidationError on the first violation. Parent resolution is
    // skipped when require_parent_closure is false (seedless exports keep
    // parent ids that point outside the file).
    void validate(bool require_parent_closure = true) const;
};

}  // namespace evolforge
