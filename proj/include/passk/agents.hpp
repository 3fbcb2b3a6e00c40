// The two agents. The Repeater submits k candidates for the original task;
// the Variator first generates k variants (sequentially, with title dedup
// and, for the CTF template, accumulated banned-theme lists) and submits one
// candidate per variant. Planning produces deterministic job lists keyed for
// seeded backends.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "passk/backend.hpp"
#include "passk/corpus.hpp"
#include "passk/errors.hpp"
#include "passk/prompt.hpp"
#include "passk/simulate.hpp"

namespace passk {

enum class Equivalence { unknown, approved, rejected };

inline const char* to_string(Equivalence e) {
    switch (e) {
        case Equivalence::approved: return "approved";
        case Equivalence::rejected: return "rejected";
        default: return "unknown";
    }
}

struct Variant {
    std::string parent_id;
    int index = 0;
    std::string title;
    std::string statement;
    std::vector<std::string> theme_history_snapshot;
    Equivalence equivalence = Equivalence::unknown;
};

struct VariantGenerationRequest {
    int count = 1;
    int retry_budget = -1;  // negative selects the default of 3 * count
    PromptTemplate tmpl;
    Bindings base_bindings;  // coding: {challenge}; ctf: {app_py, solution_py}
};

struct VariantGenerationResult {
    std::vector<Variant> variants;
    int shortfall = 0;
    int backend_calls = 0;
    int duplicate_titles = 0;
    int parse_failures = 0;
};

namespace detail {

inline std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

}  // namespace detail

// Generates up to `count` variants with pairwise-distinct titles. Parse
// failures and duplicate titles consume the retry budget; the backend is
// called at most count + retry_budget times. For the CTF template the prompt
// is re-rendered before every call with the accumulated theme and
// design-pattern lists; the coding template renders once.
inline VariantGenerationResult generate_variants(const Challenge& challenge,
                                                 const VariantGenerationRequest& request,
                                                 SolverBackend& backend) {
    if (request.count < 1) throw domain_error("variant count must be >= 1");
    if (!backend.capabilities().generate_variant) {
        throw protocol_error("backend does not support variant generation");
    }
    const int budget = request.retry_budget < 0 ? 3 * request.count : request.retry_budget;
    const int max_calls = request.count + budget;
    const bool ctf = request.tmpl.kind == PromptKind::ctf_variant;

    VariantGenerationResult result;
    std::set<std::string> seen_titles;
    std::vector<std::string> themes;
    std::vector<std::string> patterns;

    Bindings bindings = request.base_bindings;
    if (!ctf && !bindings.count("challenge")) bindings["challenge"] = challenge.statement;
    std::string prompt;
    if (!ctf) prompt = render_prompt(request.tmpl, bindings);

    for (int attempt = 0;
         result.backend_calls < max_calls &&
         static_cast<int>(result.variants.size()) < request.count;
         ++attempt) {
        if (ctf) {
            bindings["banned_themes"] = detail::join_list(themes);
            bindings["banned_design_patterns"] = detail::join_list(patterns);
            prompt = render_prompt(request.tmpl, bindings);
        }
        JobKey key{challenge.id, "variant-gen", attempt};
        std::string raw = backend.generate_variant(prompt, key);
        ++result.backend_calls;

        auto parsed = parse_variant_response(raw);
        if (!parsed) {
            ++result.parse_failures;
            continue;
        }
        if (!seen_titles.insert(parsed->title).second) {
            ++result.duplicate_titles;
            continue;
        }
        Variant v;
        v.parent_id = challenge.id;
        v.index = static_cast<int>(result.variants.size());
        v.title = parsed->title;
        v.statement = parsed->statement;
        v.theme_history_snapshot = themes;
        result.variants.push_back(std::move(v));
        themes.push_back(parsed->title);
        if (!parsed->architecture.empty()) patterns.push_back(parsed->architecture);
    }
    result.shortfall = request.count - static_cast<int>(result.variants.size());
    return result;
}

struct PlanJob {
    std::string statement;
    JobKey key;
};

struct AgentPlan {
    Agent agent = Agent::repeater;
    int k = 1;
    std::vector<PlanJob> jobs;
};

// Deterministic job list for one agent on one challenge. The Variator uses
// one job per variant; with fewer than k variants it falls back to extra
// jobs on the original statement (keeping exactly k submissions) unless the
// fallback is disabled, in which case the shortfall is an error.
inline AgentPlan plan(Agent agent, const Challenge& challenge, int k,
                      const std::vector<Variant>& variants = {},
                      bool reuse_original_on_shortfall = true) {
    check_k(k);
    AgentPlan out;
    out.agent = agent;
    out.k = k;

    if (agent == Agent::repeater) {
        for (int j = 0; j < k; ++j) {
            out.jobs.push_back({challenge.statement, {challenge.id, "original", j}});
        }
        return out;
    }

    const int available = static_cast<int>(variants.size());
    if (available < k && !reuse_original_on_shortfall) {
        throw protocol_error("variator has " + std::to_string(available) +
                             " variants for k=" + std::to_string(k) +
                             " and original-reuse fallback is disabled");
    }
    for (int j = 0; j < k; ++j) {
        if (j < available) {
            out.jobs.push_back(
                {variants[j].statement,
                 {challenge.id, "variant-" + std::to_string(variants[j].index), 0}});
        } else {
            out.jobs.push_back({challenge.statement, {challenge.id, "original", j}});
        }
    }
    return out;
}

}  // namespace passk
