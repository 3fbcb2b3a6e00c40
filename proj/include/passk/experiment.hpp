// Experiment orchestration: judges, the bounded worker pool, variant
// persistence, and the three protocols (repeater-vs-variator Pass@k sweep,
// per-variant inconsistency testing, and private-dataset reconstitution), plus
// the synthetic corpus generator used by the simulated backend.
//
// All randomness descends from the experiment seed through per-job key
// folding, and journal records are released in plan order, so results are
// bit-identical for any worker count and any interrupted/resumed schedule.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "passk/agents.hpp"
#include "passk/backend.hpp"
#include "passk/config.hpp"
#include "passk/corpus.hpp"
#include "passk/errors.hpp"
#include "passk/journal.hpp"
#include "passk/judge.hpp"
#include "passk/prompt.hpp"
#include "passk/rng.hpp"
#include "passk/simulate.hpp"
#include "passk/solution.hpp"
#include "passk/stats.hpp"

namespace passk {

// ---------------------------------------------------------------------------
// Judges: turn a candidate solution into a verdict.

class Judge {
  public:
    virtual ~Judge() = default;
    virtual Verdict judge(const CandidateSolution& candidate, const TestSuite& suite) = 0;
};

// Executes the candidate in the process sandbox against the real test suite.
class SandboxJudge final : public Judge {
  public:
    explicit SandboxJudge(SandboxLimits limits) : limits_(std::move(limits)) {}
    Verdict judge(const CandidateSolution& candidate, const TestSuite& suite) override {
        return run_candidate(candidate, suite, limits_);
    }

  private:
    SandboxLimits limits_;
};

// Compares the extracted program against a known-correct reference program.
// Useful for large simulated sweeps where process spawning would dominate:
// the simulated backend emits one canonical passing program, so textual
// equality is exactly equivalent to running it.
class ReferenceJudge final : public Judge {
  public:
    explicit ReferenceJudge(std::string passing_program = "cat")
        : passing_program_(std::move(passing_program)) {}
    Verdict judge(const CandidateSolution& candidate, const TestSuite& suite) override {
        Verdict verdict;
        if (!candidate.extraction_ok) {
            verdict.outcome = Outcome::extraction_error;
            return verdict;
        }
        bool ok = candidate.program == passing_program_;
        verdict.outcome = ok ? Outcome::pass : Outcome::fail;
        verdict.per_case.assign(suite.cases.size(), verdict.outcome);
        if (!ok && !suite.cases.empty()) verdict.per_case.resize(1);  // early-exit shape
        return verdict;
    }

  private:
    std::string passing_program_;
};

// ---------------------------------------------------------------------------
// Bounded worker pool over an indexed job list. The first exception aborts
// remaining work and is rethrown on the caller's thread.

template <typename Fn>
void run_indexed_jobs(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers < 1) throw domain_error("worker count must be >= 1");
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    unsigned threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Variant persistence: JSONL sidecar so an interrupted run reuses previously
// generated variants instead of re-querying the backend. Each challenge's
// variants are stored as a header line {"challenge","count"} followed by
// `count` variant lines; incomplete trailing groups are truncated on open.

class VariantStore {
  public:
    explicit VariantStore(const std::filesystem::path& path) : path_(path) {
        if (std::filesystem::exists(path)) load_and_truncate();
        out_.open(path, std::ios::binary | std::ios::app);
        if (!out_) {
            throw infrastructure_error("cannot open variant store for append: " +
                                       path.string());
        }
    }

    std::optional<std::vector<Variant>> find(const std::string& challenge_id) const {
        auto it = groups_.find(challenge_id);
        if (it == groups_.end()) return std::nullopt;
        return it->second;
    }

    void append(const std::string& challenge_id, const std::vector<Variant>& variants) {
        nlohmann::json header{{"challenge", challenge_id},
                              {"count", static_cast<int>(variants.size())}};
        out_ << header.dump() << '\n';
        for (const auto& v : variants) {
            nlohmann::json line{{"challenge", v.parent_id},
                                {"index", v.index},
                                {"title", v.title},
                                {"statement", v.statement}};
            out_ << line.dump() << '\n';
        }
        out_.flush();
        if (!out_) throw infrastructure_error("variant store write failed: " + path_.string());
        groups_[challenge_id] = variants;
    }

  private:
    void load_and_truncate() {
        std::ifstream in(path_, std::ios::binary);
        std::string contents((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
        in.close();
        std::size_t pos = 0;
        std::size_t keep = 0;  // byte offset just past the last complete group
        while (true) {
            std::size_t group_start = pos;
            std::size_t end = contents.find('\n', pos);
            if (end == std::string::npos) break;
            nlohmann::json header =
                nlohmann::json::parse(contents.substr(pos, end - pos), nullptr, false);
            if (header.is_discarded() || !header.contains("challenge") ||
                !header.contains("count")) {
                throw config_error("variant store corrupt near byte " +
                                   std::to_string(group_start) + " in " + path_.string());
            }
            pos = end + 1;
            int count = header["count"].get<int>();
            std::vector<Variant> group;
            bool complete = true;
            for (int i = 0; i < count; ++i) {
                end = contents.find('\n', pos);
                if (end == std::string::npos) {
                    complete = false;
                    break;
                }
                nlohmann::json line =
                    nlohmann::json::parse(contents.substr(pos, end - pos), nullptr, false);
                if (line.is_discarded()) {
                    throw config_error("variant store corrupt in " + path_.string());
                }
                Variant v;
                v.parent_id = line.at("challenge").get<std::string>();
                v.index = line.at("index").get<int>();
                v.title = line.at("title").get<std::string>();
                v.statement = line.at("statement").get<std::string>();
                group.push_back(std::move(v));
                pos = end + 1;
            }
            if (!complete) break;
            groups_[header["challenge"].get<std::string>()] = std::move(group);
            keep = pos;
        }
        if (keep != contents.size()) std::filesystem::resize_file(path_, keep);
    }

    std::filesystem::path path_;
    std::map<std::string, std::vector<Variant>> groups_;
    std::ofstream out_;
};

// ---------------------------------------------------------------------------
// Shared run context and the plan executor.

struct ExperimentContext {
    SolverBackend& backend;
    Judge& judge;
    PromptSet prompts;
    ExperimentConfig config;
    std::string experiment_id;
    std::string backend_label;
    std::filesystem::path journal_path;
    std::filesystem::path variant_store_path;  // empty = no variant persistence
};

struct PlannedJob {
    std::string statement;
    const TestSuite* suite;
    JobKey key;
};

namespace detail {

// Solves one job end to end: render prompt -> backend -> extract -> judge.
inline ResultRecord solve_job(const ExperimentContext& ctx, const PlannedJob& job) {
    auto prompt = render_prompt(ctx.prompts.coding_solve,
                                {{"challenge", job.statement}, {"hint", hint_binding("")}});
    auto started = std::chrono::steady_clock::now();
    std::string raw = ctx.backend.generate_solution(prompt, job.key);
    CandidateSolution candidate = extract_solution(raw, job.key.challenge_id);
    Verdict verdict = ctx.judge.judge(candidate, *job.suite);

    ResultRecord record;
    record.experiment = ctx.experiment_id;
    record.key = job.key;
    record.outcome = verdict.outcome;
    record.cases_run = static_cast<int>(verdict.per_case.size());
    record.cases_passed = static_cast<int>(
        std::count(verdict.per_case.begin(), verdict.per_case.end(), Outcome::pass));
    if (ctx.config.record_timing) {
        record.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
    }
    record.backend = ctx.backend_label;
    record.job_seed = seed_hex(job.key.fold_into(ctx.config.seed));
    return record;
}

}  // namespace detail

// Runs every planned job not already present in the journal, writing records
// in plan order, then returns the full journal contents (old + new).
inline std::vector<ResultRecord> execute_plan(const ExperimentContext& ctx,
                                              const std::vector<PlannedJob>& jobs) {
    JournalWriter writer(ctx.journal_path);
    std::size_t existing = writer.existing_records();
    if (existing > jobs.size()) {
        throw protocol_error("journal " + ctx.journal_path.string() + " holds " +
                             std::to_string(existing) + " records but the plan has only " +
                             std::to_string(jobs.size()) + " jobs");
    }
    if (existing > 0) {
        auto prior = read_journal(ctx.journal_path);
        for (std::size_t i = 0; i < existing; ++i) {
            if (prior[i].key.to_string() != jobs[i].key.to_string()) {
                throw protocol_error("journal record " + std::to_string(i) + " is for job " +
                                     prior[i].key.to_string() + " but the plan expects " +
                                     jobs[i].key.to_string() +
                                     "; config/seed mismatch with the existing journal");
            }
            if (prior[i].job_seed != seed_hex(jobs[i].key.fold_into(ctx.config.seed))) {
                throw protocol_error("journal " + ctx.journal_path.string() +
                                     " was written under a different seed; refusing to mix "
                                     "results");
            }
            if (prior[i].backend != ctx.backend_label) {
                throw protocol_error("journal " + ctx.journal_path.string() +
                                     " was written by backend '" + prior[i].backend +
                                     "' but this run uses '" + ctx.backend_label + "'");
            }
        }
    }
    std::size_t remaining = jobs.size() - existing;
    run_indexed_jobs(remaining, ctx.config.workers, [&](std::size_t i) {
        std::size_t index = existing + i;
        writer.submit(index, detail::solve_job(ctx, jobs[index]));
    });
    return read_journal(ctx.journal_path);
}

// Generates (or reloads) variants for one challenge using the configured
// template and dedup protocol. Variant generation is serialized per challenge
// because each retry may depend on accumulated titles.
inline std::vector<Variant> obtain_variants(const ExperimentContext& ctx,
                                            const Challenge& challenge, int count,
                                            VariantStore* store) {
    if (store != nullptr) {
        if (auto cached = store->find(challenge.id)) return *cached;
    }
    VariantGenerationRequest request;
    request.count = count;
    request.tmpl = ctx.prompts.coding_variant;
    auto generated = generate_variants(challenge, request, ctx.backend);
    if (store != nullptr) store->append(challenge.id, generated.variants);
    return generated.variants;
}

// ---------------------------------------------------------------------------
// Pass@k experiment (public/simulated protocol).

struct PassAtKRow {
    std::string dataset;
    std::string challenge;  // empty for dataset-mean rows
    Agent agent = Agent::repeater;
    int k = 1;
    double value = 0.0;
};

struct ChallengeEstimates {
    std::string challenge;
    long long original_successes = 0;
    int original_trials = 0;
    long long variant_successes = 0;  // pooled over all variant candidates
    int variant_trials = 0;
    std::vector<long long> per_variant_successes;
    std::vector<int> per_variant_trials;
    double p_o_hat = 0.0;
    double p_v_hat = 0.0;
};

struct Exclusion {
    std::string challenge;
    std::string reason;
};

struct PassAtKExperimentResult {
    std::vector<PassAtKRow> rows;   // per challenge x agent x k
    std::vector<PassAtKRow> means;  // per agent x k (unweighted over challenges)
    std::vector<ChallengeEstimates> estimates;
    std::vector<Exclusion> excluded;
};

namespace detail {

inline int variant_index_of_task(const std::string& task) {
    // "variant-<i>" -> i, anything else -> -1
    const std::string prefix = "variant-";
    if (task.rfind(prefix, 0) != 0) return -1;
    try {
        std::size_t pos = 0;
        int index = std::stoi(task.substr(prefix.size()), &pos);
        if (pos != task.size() - prefix.size() || index < 0) return -1;
        return index;
    } catch (const std::exception&) {
        return -1;
    }
}

inline ChallengeEstimates tally_records(const std::string& challenge_id,
                                        const std::vector<ResultRecord>& records,
                                        int variant_count) {
    ChallengeEstimates tally;
    tally.challenge = challenge_id;
    tally.per_variant_successes.assign(variant_count, 0);
    tally.per_variant_trials.assign(variant_count, 0);
    for (const auto& record : records) {
        if (record.key.challenge_id != challenge_id) continue;
        int success = record.outcome == Outcome::pass ? 1 : 0;
        if (record.key.task == "original") {
            ++tally.original_trials;
            tally.original_successes += success;
            continue;
        }
        int vi = variant_index_of_task(record.key.task);
        if (vi < 0) continue;
        ++tally.variant_trials;
        tally.variant_successes += success;
        if (vi < variant_count) {
            ++tally.per_variant_trials[vi];
            tally.per_variant_successes[vi] += success;
        }
    }
    if (tally.original_trials > 0) {
        tally.p_o_hat =
            static_cast<double>(tally.original_successes) / tally.original_trials;
    }
    if (tally.variant_trials > 0) {
        tally.p_v_hat = static_cast<double>(tally.variant_successes) / tally.variant_trials;
    }
    return tally;
}

inline double estimate_value(PassAtKEstimate::Method method, long long successes,
                             int trials, int k) {
    if (method == PassAtKEstimate::Method::combinatorial && k <= trials) {
        return pass_at_k_combinatorial(trials, successes, k).value;
    }
    double rate = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    return pass_at_k_plug_in(rate, k).value;
}

}  // namespace detail

// Runs the full repeater-vs-variator protocol over a challenge set: per
// challenge, `original_candidates` solves of the original statement plus
// `candidates_per_variant` solves of each of `variant_count` variants; then
// converts the success-rate estimates into Pass@k rows for each k.
inline PassAtKExperimentResult run_passk_experiment(const std::vector<Challenge>& challenges,
                                                    const ExperimentContext& ctx,
                                                    const std::string& dataset_label) {
    ctx.config.validate();
    PassAtKExperimentResult result;

    std::unique_ptr<VariantStore> store;
    if (!ctx.variant_store_path.empty()) {
        store = std::make_unique<VariantStore>(ctx.variant_store_path);
    }

    std::vector<PlannedJob> jobs;
    std::vector<const Challenge*> included;
    std::vector<std::vector<Variant>> variant_sets;
    for (const auto& challenge : challenges) {
        if (challenge.test_suite.cases.empty()) {
            result.excluded.push_back({challenge.id, "no test cases"});
            continue;
        }
        auto variants =
            obtain_variants(ctx, challenge, ctx.config.variant_count, store.get());
        included.push_back(&challenge);
        variant_sets.push_back(std::move(variants));
    }
    for (std::size_t c = 0; c < included.size(); ++c) {
        const Challenge& challenge = *included[c];
        for (int j = 0; j < ctx.config.original_candidates; ++j) {
            jobs.push_back({challenge.statement, &challenge.test_suite,
                            {challenge.id, "original", j}});
        }
        for (const auto& variant : variant_sets[c]) {
            for (int j = 0; j < ctx.config.candidates_per_variant; ++j) {
                jobs.push_back({variant.statement, &challenge.test_suite,
                                {challenge.id, "variant-" + std::to_string(variant.index),
                                 j}});
            }
        }
    }

    auto records = execute_plan(ctx, jobs);

    std::map<int, std::map<int, double>> mean_acc;  // agent -> k -> sum of values
    for (const Challenge* challenge : included) {
        auto tally = detail::tally_records(challenge->id, records, ctx.config.variant_count);
        for (int k : ctx.config.k_values) {
            double repeater = detail::estimate_value(
                ctx.config.estimator, tally.original_successes, tally.original_trials, k);
            double variator = detail::estimate_value(
                ctx.config.estimator, tally.variant_successes, tally.variant_trials, k);
            result.rows.push_back(
                {dataset_label, challenge->id, Agent::repeater, k, repeater});
            result.rows.push_back(
                {dataset_label, challenge->id, Agent::variator, k, variator});
            mean_acc[0][k] += repeater;
            mean_acc[1][k] += variator;
        }
        result.estimates.push_back(std::move(tally));
    }
    if (!included.empty()) {
        for (int k : ctx.config.k_values) {
            result.means.push_back({dataset_label, "", Agent::repeater, k,
                                    mean_acc[0][k] / static_cast<double>(included.size())});
            result.means.push_back({dataset_label, "", Agent::variator, k,
                                    mean_acc[1][k] / static_cast<double>(included.size())});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Inconsistency experiment: m variants x n candidates on one challenge, then
// the Monte-Carlo dispersion test against the pooled binomial null.

struct VariantRunStats {
    int index = 0;
    std::string title;
    long long successes = 0;
    int trials = 0;
    double rate = 0.0;
    Interval wilson;
};

struct InconsistencyExperimentResult {
    std::vector<VariantRunStats> variants;
    InconsistencyTestResult test;
    double pooled_rate = 0.0;
    int n_per_variant = 0;
};

inline InconsistencyExperimentResult run_inconsistency_experiment(
    const Challenge& challenge, int m, int n, const ExperimentContext& ctx,
    const std::vector<Variant>* prebuilt = nullptr) {
    if (m < 2) throw protocol_error("inconsistency test requires at least 2 variants");
    if (n < 1) throw domain_error("candidates per variant must be >= 1");
    if (challenge.test_suite.cases.empty()) {
        throw protocol_error("challenge " + challenge.id + " has no test cases");
    }

    std::unique_ptr<VariantStore> store;
    if (!ctx.variant_store_path.empty()) {
        store = std::make_unique<VariantStore>(ctx.variant_store_path);
    }
    std::vector<Variant> variants;
    if (prebuilt != nullptr) {
        for (const auto& v : *prebuilt) {
            if (v.equivalence != Equivalence::rejected) variants.push_back(v);
        }
        if (static_cast<int>(variants.size()) > m) variants.resize(m);
    } else {
        variants = obtain_variants(ctx, challenge, m, store.get());
    }
    if (static_cast<int>(variants.size()) < 2) {
        throw protocol_error("fewer than 2 usable variants for challenge " + challenge.id);
    }

    std::vector<PlannedJob> jobs;
    for (const auto& variant : variants) {
        for (int j = 0; j < n; ++j) {
            jobs.push_back({variant.statement, &challenge.test_suite,
                            {challenge.id, "variant-" + std::to_string(variant.index), j}});
        }
    }
    auto records = execute_plan(ctx, jobs);
    int max_index = 0;
    for (const auto& variant : variants) max_index = std::max(max_index, variant.index);
    auto tally = detail::tally_records(challenge.id, records, max_index + 1);

    InconsistencyExperimentResult result;
    result.n_per_variant = n;
    VariantCounts counts;
    counts.trials_per_variant = n;
    for (const auto& variant : variants) {
        VariantRunStats stats;
        stats.index = variant.index;
        stats.title = variant.title;
        stats.successes = tally.per_variant_successes[variant.index];
        stats.trials = tally.per_variant_trials[variant.index];
        stats.rate = stats.trials > 0 ? static_cast<double>(stats.successes) / stats.trials
                                      : 0.0;
        stats.wilson = wilson_interval(stats.successes, stats.trials, 0.95);
        counts.successes.push_back(stats.successes);
        result.variants.push_back(std::move(stats));
    }
    result.pooled_rate = pooled_rate(counts);
    result.test = inconsistency_test(counts, ctx.config.replicates,
                                     rng::fold(ctx.config.seed, "inconsistency-mc"));
    return result;
}

// ---------------------------------------------------------------------------
// Private-dataset reconstitution: median variant becomes the new original.

struct PrivateDataset {
    int median_index = 0;      // variant chosen as the new original
    double median_rate = 0.0;  // its success rate = new p_o estimate
    double p_v_hat = 0.0;      // pooled over the remaining variants
    std::vector<double> rates;
};

// Pure selection rule: rates are ranked ascending; the variant at rank
// ceil(m/2) (1-based) defines the median rate; among variants tied at that
// rate the lowest index wins.
inline PrivateDataset build_private_dataset(const std::vector<long long>& successes,
                                            int trials_per_variant, int expected_count) {
    if (static_cast<int>(successes.size()) != expected_count) {
        throw protocol_error("private dataset requires " + std::to_string(expected_count) +
                             " variants with complete runs, got " +
                             std::to_string(successes.size()));
    }
    if (expected_count < 2) throw protocol_error("private dataset requires >= 2 variants");
    if (trials_per_variant < 1) throw domain_error("trials per variant must be >= 1");

    PrivateDataset result;
    result.rates.reserve(successes.size());
    for (long long s : successes) {
        if (s < 0 || s > trials_per_variant) {
            throw domain_error("variant successes out of range");
        }
        result.rates.push_back(static_cast<double>(s) / trials_per_variant);
    }
    std::vector<double> sorted = result.rates;
    std::sort(sorted.begin(), sorted.end());
    double median_rate = sorted[(sorted.size() + 1) / 2 - 1];
    int median_index = -1;
    for (std::size_t i = 0; i < result.rates.size(); ++i) {
        if (result.rates[i] == median_rate) {
            median_index = static_cast<int>(i);
            break;
        }
    }
    result.median_index = median_index;
    result.median_rate = median_rate;
    long long rest = 0;
    for (std::size_t i = 0; i < successes.size(); ++i) {
        if (static_cast<int>(i) != median_index) rest += successes[i];
    }
    result.p_v_hat = static_cast<double>(rest) /
                     (static_cast<double>(successes.size() - 1) * trials_per_variant);
    return result;
}

struct PrivateExperimentResult {
    std::string challenge;
    PrivateDataset dataset;
    std::vector<Variant> variants;
    ChallengeEstimates tally;
};

// Generates each challenge's variant pool, judges
// `private_candidates_per_variant` candidates per variant (one shared journal
// for the whole batch), and reconstitutes every private dataset.
inline std::vector<PrivateExperimentResult> run_private_batch(
    const std::vector<Challenge>& challenges, const ExperimentContext& ctx) {
    ctx.config.validate();
    std::unique_ptr<VariantStore> store;
    if (!ctx.variant_store_path.empty()) {
        store = std::make_unique<VariantStore>(ctx.variant_store_path);
    }

    std::vector<std::vector<Variant>> variant_sets;
    for (const auto& challenge : challenges) {
        if (challenge.test_suite.cases.empty()) {
            throw protocol_error("challenge " + challenge.id + " has no test cases");
        }
        auto variants =
            obtain_variants(ctx, challenge, ctx.config.variant_count, store.get());
        if (static_cast<int>(variants.size()) < ctx.config.variant_count) {
            throw protocol_error("fewer than " + std::to_string(ctx.config.variant_count) +
                                 " variants with complete runs for challenge " +
                                 challenge.id);
        }
        variant_sets.push_back(std::move(variants));
    }

    std::vector<PlannedJob> jobs;
    for (std::size_t c = 0; c < challenges.size(); ++c) {
        for (const auto& variant : variant_sets[c]) {
            for (int j = 0; j < ctx.config.private_candidates_per_variant; ++j) {
                jobs.push_back({variant.statement, &challenges[c].test_suite,
                                {challenges[c].id,
                                 "variant-" + std::to_string(variant.index), j}});
            }
        }
    }
    auto records = execute_plan(ctx, jobs);

    std::vector<PrivateExperimentResult> results;
    for (std::size_t c = 0; c < challenges.size(); ++c) {
        PrivateExperimentResult result;
        result.challenge = challenges[c].id;
        result.tally =
            detail::tally_records(challenges[c].id, records, ctx.config.variant_count);
        result.dataset =
            build_private_dataset(result.tally.per_variant_successes,
                                  ctx.config.private_candidates_per_variant,
                                  ctx.config.variant_count);
        result.variants = std::move(variant_sets[c]);
        results.push_back(std::move(result));
    }
    return results;
}

inline PrivateExperimentResult run_private_experiment(const Challenge& challenge,
                                                      const ExperimentContext& ctx) {
    return run_private_batch({challenge}, ctx).front();
}

// ---------------------------------------------------------------------------
// Synthetic corpus for the simulated backend. Each statement embeds its
// latent solve rate (drawn uniformly from the seed) as a marker line that the
// simulated backend reads back; test suites are echo suites the canonical
// passing program satisfies.

inline std::vector<Challenge> make_synthetic_corpus(int count, std::uint64_t seed,
                                                    int cases_per_challenge = 3) {
    if (count < 1) throw domain_error("challenge count must be >= 1");
    if (cases_per_challenge < 1) throw domain_error("cases per challenge must be >= 1");
    rng::Stream root(seed);
    auto latent = root.fold("synthetic-latent");
    std::vector<Challenge> corpus;
    corpus.reserve(count);
    for (int i = 0; i < count; ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "sim-%03d", i);
        Challenge challenge;
        challenge.id = id;
        challenge.title = "Synthetic echo challenge " + std::to_string(i);
        double rate = latent.fold(challenge.id).unit_at(0);
        char marker[64];
        std::snprintf(marker, sizeof(marker), "latent-rate: %.17g", rate);
        challenge.statement = "Read every line of input and write it back unchanged.\n" +
                              std::string(marker) + "\n";
        challenge.difficulty = Difficulty::competition;
        challenge.source = ChallengeSource::public_corpus;
        for (int c = 0; c < cases_per_challenge; ++c) {
            std::string payload = "line-" + std::to_string(c) + "\n";
            challenge.test_suite.cases.push_back({payload, payload});
        }
        corpus.push_back(std::move(challenge));
    }
    return corpus;
}

}  // namespace passk
