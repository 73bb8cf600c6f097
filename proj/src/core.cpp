#include "evolforge/core.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "evolforge/errors.hpp"
#include "evolforge/hashing.hpp"

namespace evolforge {

namespace {

inline bool is_word_char(unsigned char c) {
    // Letters, underscore, and any non-ASCII byte so multibyte UTF-8
    // sequences stay in one token. Digits form their own runs.
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

inline bool is_digit_char(unsigned char c) { return std::isdigit(c); }

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        if (is_word_char(c)) {
            while (i < n && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
        } else if (is_digit_char(c)) {
            while (i < n && is_digit_char(static_cast<unsigned char>(text[i]))) ++i;
        } else {
            ++i;  // single punctuation mark
        }
        tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

int count_tokens(std::string_view text) {
    return static_cast<int>(tokenize(text).size());
}

std::string canonicalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return trim(out);
}

std::string content_id(std::string_view instruction, std::string_view input,
                       std::string_view output) {
    std::string instr = canonicalize_text(instruction);
    if (instr.empty()) throw EmptyInstruction();
    std::string blob = instr;
    blob.push_back('\x1f');
    blob += canonicalize_text(input);
    blob.push_back('\x1f');
    blob += canonicalize_text(output);
    return digest128_hex(blob);
}

bool is_in_breadth(OperatorId op) { return op == OperatorId::Broaden; }

std::string_view operator_name(OperatorId op) {
    switch (op) {
        case OperatorId::AddConstraints: return "add_constraints";
        case OperatorId::Deepen: return "deepen";
        case OperatorId::Concretize: return "concretize";
        case OperatorId::IncreaseReasoning: return "increase_reasoning";
        case OperatorId::ComplicateInput: return "complicate_input";
        case OperatorId::Broaden: return "broaden";
    }
    return "unknown";
}

std::optional<OperatorId> operator_from_name(std::string_view name) {
    static const std::unordered_map<std::string_view, OperatorId> table = {
        {"add_constraints", OperatorId::AddConstraints},
        {"deepen", OperatorId::Deepen},
        {"concretize", OperatorId::Concretize},
        {"increase_reasoning", OperatorId::IncreaseReasoning},
        {"complicate_input", OperatorId::ComplicateInput},
        {"broaden", OperatorId::Broaden},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

Origin Origin::evolved(int round, OperatorId op, std::string parent_id) {
    Origin o;
    o.kind = Kind::Evolved;
    o.round = round;
    o.op = op;
    o.parent_id = std::move(parent_id);
    return o;
}

InstructionPair InstructionPair::make(std::string instruction, std::string input,
                                      std::string output, Origin origin) {
    InstructionPair p;
    p.instruction = std::move(instruction);
    p.input = std::move(input);
    p.output = std::move(output);
    p.origin = std::move(origin);
    p.rehash();
    return p;
}

void InstructionPair::rehash() {
    id = content_id(instruction, input, output);
    token_count = count_tokens(instruction) + count_tokens(input) + count_tokens(output);
}

nlohmann::json Manifest::to_json() const {
    nlohmann::json j{
        {"stage_name", stage_name},
        {"pair_count", pair_count},
        {"config_digest", config_digest},
        {"rng_seed", rng_seed},
        {"parent_manifest_digest",
         parent_manifest_digest ? nlohmann::json(*parent_manifest_digest)
                                : nlohmann::json(nullptr)},
    };
    if (!extra.empty()) j["extra"] = extra;
    return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
    Manifest m;
    m.stage_name = j.at("stage_name").get<std::string>();
    m.pair_count = j.at("pair_count").get<std::int64_t>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.rng_seed = j.at("rng_seed").get<std::int64_t>();
    if (j.contains("parent_manifest_digest") && !j["parent_manifest_digest"].is_null()) {
        m.parent_manifest_digest = j["parent_manifest_digest"].get<std::string>();
    }
    if (j.contains("extra")) m.extra = j["extra"];
    return m;
}

std::string Manifest::digest() const { return digest128_hex(to_json().dump()); }

void Dataset::validate() const {
    if (manifest.pair_count != static_cast<std::int64_t>(pairs.size())) {
        throw ValidationError("manifest pair_count does not match dataset size");
    }
    std::unordered_set<std::string_view> ids;
    ids.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (!ids.insert(p.id).second) {
            throw ValidationError("duplicate pair id: " + p.id);
        }
    }
    for (const auto& p : pairs) {
        if (p.origin.kind == Origin::Kind::Evolved && !ids.count(p.origin.parent_id)) {
            throw ValidationError("evolved pair " + p.id + " references missing parent " +
                                  p.origin.parent_id);
        }
    }
}

}  // namespace evolforge
