#include "evolforge/mock_backend.hpp"

#include <array>
#include <sstream>

#include "evolforge/core.hpp"
#include "evolforge/hashing.hpp"
#include "evolforge/rng.hpp"

namespace evolforge::gateway {

namespace {

constexpr std::uint64_t kQuestionSalt = 0x71e5710a5a17ULL;
constexpr std::uint64_t kSolutionSalt = 0x50107105a17ULL;
constexpr std::uint64_t kRewriteSalt = 0x4e3172175a17ULL;
constexpr std::uint64_t kRefusalSalt = 0x4ef05a15a17ULL;
constexpr std::uint64_t kCopySalt = 0xc0b75a175a17ULL;

const std::array<const char*, 12> kActions = {
    "reverses", "sorts", "merges", "flattens", "rotates", "partitions",
    "serializes", "deduplicates", "validates", "compresses", "parses", "transforms",
};

const std::array<const char*, 12> kSubjects = {
    "a singly linked list of integers",
    "a binary search tree of strings",
    "an array of customer records",
    "a dictionary of word counts",
    "a queue of pending tasks",
    "a jagged two dimensional array",
    "a stream of sensor readings",
    "a stack of undo operations",
    "a graph given as an adjacency list",
    "a list of timestamped orders",
    "a CSV file of transactions",
    "an immutable collection of dates",
};

const std::array<const char*, 12> kQualifiers = {
    "in place without extra allocations",
    "using recursion instead of loops",
    "using LINQ expressions only",
    "while keeping the original order stable",
    "in a single pass over the input",
    "without using built in library helpers",
    "while handling null entries gracefully",
    "using generics for the element type",
    "while logging every state transition",
    "using iterators and deferred execution",
    "in at most O(n log n) time",
    "while reporting progress through events",
};

std::string extract_language(const std::string& prompt) {
    auto pos = prompt.find("specific to ");
    if (pos != std::string::npos) {
        auto start = pos + 12;
        auto end = prompt.find(" language", start);
        if (end != std::string::npos && end > start && end - start < 32) {
            return prompt.substr(start, end - start);
        }
    }
    auto pos2 = prompt.find("task in ");
    if (pos2 != std::string::npos) {
        auto start = pos2 + 8;
        auto end = prompt.find_first_of(".\n ", start);
        if (end != std::string::npos && end > start) return prompt.substr(start, end - start);
    }
    return "csharp";
}

int extract_count(const std::string& prompt) {
    auto pos = prompt.find("Write ");
    if (pos == std::string::npos) return 10;
    size_t i = pos + 6;
    long n = 0;
    while (i < prompt.size() && prompt[i] >= '0' && prompt[i] <= '9') {
        n = n * 10 + (prompt[i] - '0');
        ++i;
    }
    if (n <= 0) return 10;
    return static_cast<int>(std::min<long>(n, 2000));
}

std::string synth_question(SeededRng& rng, const std::string& language) {
    std::uint64_t idx = rng.next();
    const char* action = kActions[idx % kActions.size()];
    const char* subject = kSubjects[(idx / 12) % kSubjects.size()];
    const char* qualifier = kQualifiers[(idx / 144) % kQualifiers.size()];
    int size_hint = 2 + static_cast<int>((idx / 1728) % 997);
    int budget_ms = 5 + static_cast<int>((idx / 1722816) % 495);
    std::ostringstream q;
    q << "Write a " << language << " method that " << action << " " << subject << " "
      << qualifier << ", assuming the collection holds at least " << size_hint
      << " elements and each call completes within " << budget_ms << " milliseconds.";
    return q.str();
}

// Near duplicate of `base`: one adverb inserted before the final period.
// Keeps 3-shingle Jaccard well above the default dedup threshold.
std::string near_duplicate(const std::string& base) {
    std::string out = base;
    if (!out.empty() && out.back() == '.') {
        out.insert(out.size() - 1, " carefully");
    } else {
        out += " carefully";
    }
    return out;
}

}  // namespace

MockBackend::MockBackend(std::int64_t seed, MockOptions options)
    : seed_(seed), options_(options) {}

CompletionResponse MockBackend::complete(const CompletionRequest& req) {
    req.validate();
    CompletionResponse resp;
    resp.text = render(req);
    resp.finish_reason = FinishReason::Stop;
    resp.prompt_tokens = count_tokens(req.prompt);
    resp.completion_tokens = count_tokens(resp.text);
    resp.latency_ms = 0;
    return resp;
}

std::string MockBackend::render(const CompletionRequest& req) const {
    const std::uint64_t prompt_hash = fnv1a64(req.prompt);
    const std::uint64_t salt =
        combine_hash(prompt_hash, combine_hash(static_cast<std::uint64_t>(req.request_seed),
                                               static_cast<std::uint64_t>(seed_)));

    if (req.prompt.find(kRefusalTrigger) != std::string::npos) {
        return kRefusalText;
    }
    if (req.prompt.find("programming interview questions") != std::string::npos) {
        return question_list(req.prompt, salt);
    }
    if (req.prompt.find("#Given Prompt#") != std::string::npos) {
        return evolution_rewrite(req.prompt, salt);
    }
    if (req.prompt.find("Solve the following task") != std::string::npos) {
        return solution(req.prompt, salt);
    }

    SeededRng rng(salt);
    std::ostringstream out;
    out << "Acknowledged. Reference token " << std::hex << rng.next() << ".";
    return out.str();
}

std::string MockBackend::question_list(const std::string& prompt, std::uint64_t salt) const {
    const std::string language = extract_language(prompt);
    const int count = extract_count(prompt);
    SeededRng rng(combine_hash(salt, kQuestionSalt));

    std::vector<std::string> questions;
    questions.reserve(count);
    for (int i = 0; i < count; ++i) {
        if (i % 13 == 9 && i >= 5) {
            // Reissue an earlier question with a cosmetic tweak; downstream
            // curation is expected to catch these.
            questions.push_back(near_duplicate(questions[i - 5]));
        } else {
            questions.push_back(synth_question(rng, language));
        }
    }

    std::ostringstream out;
    out << "Here are " << count << " " << language << " interview questions:\n\n";
    for (int i = 0; i < count; ++i) {
        out << (i + 1) << ". " << questions[i] << "\n";
    }
    return out.str();
}

std::string MockBackend::solution(const std::string& prompt, std::uint64_t salt) const {
    if (options_.refusal_rate > 0.0 &&
        hash_unit(combine_hash(fnv1a64(prompt),
                               combine_hash(kRefusalSalt, static_cast<std::uint64_t>(seed_)))) <
            options_.refusal_rate) {
        return kRefusalText;
    }

    const std::string language = extract_language(prompt);
    SeededRng rng(combine_hash(salt, kSolutionSalt));
    const std::uint64_t tag = rng.next();
    char name[32];
    std::snprintf(name, sizeof(name), "Process%04x", static_cast<unsigned>(tag & 0xffff));
    const int mul = 2 + static_cast<int>(rng.bounded(9));
    const int add = 1 + static_cast<int>(rng.bounded(17));
    const bool with_helper = rng.bounded(5) == 0;

    std::ostringstream out;
    out << "Here is a complete " << language << " solution:\n\n";
    out << "```" << language << "\n";
    out << "using System;\nusing System.Collections.Generic;\n\n";
    out << "public static class Solution\n{\n";
    out << "    public static List<int> " << name << "(List<int> items)\n    {\n";
    out << "        var result = new List<int>(items.Count);\n";
    out << "        foreach (var item in items)\n        {\n";
    if (with_helper) {
        out << "            result.Add(Scale(item));\n";
    } else {
        out << "            result.Add(item * " << mul << " + " << add << ");\n";
    }
    out << "        }\n        return result;\n    }\n";
    if (with_helper) {
        out << "\n    private static int Scale(int value)\n    {\n";
        out << "        return value * " << mul << " + " << add << ";\n    }\n";
    }
    out << "}\n```\n\n";
    out << "The method walks the input once and accumulates the transformed values.\n";
    return out.str();
}

std::string MockBackend::evolution_rewrite(const std::string& prompt,
                                           std::uint64_t salt) const {
    std::string parent;
    auto begin = prompt.find("#Given Prompt#:");
    if (begin != std::string::npos) {
        begin += 15;
        auto end = prompt.find("#Rewritten Prompt#", begin);
        if (end == std::string::npos) end = prompt.size();
        parent = canonicalize_text(prompt.substr(begin, end - begin));
    }

    if (!parent.empty() && options_.parent_copy_rate > 0.0 &&
        hash_unit(combine_hash(fnv1a64(prompt),
                               combine_hash(kCopySalt, static_cast<std::uint64_t>(seed_)))) <
            options_.parent_copy_rate) {
        return parent;
    }

    const std::string language = extract_language(prompt);
    SeededRng rng(combine_hash(salt, kRewriteSalt));
    std::string fresh = synth_question(rng, language);
    fresh += " The solution must also validate its arguments and fail fast on malformed input.";
    return fresh;
}

}  // namespace evolforge::gateway
