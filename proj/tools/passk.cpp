// Command-line interface: closed-form/Monte-Carlo oracles, the inconsistency
// experiment, the repeater-vs-variator Pass@k protocol, private-dataset
// reconstitution, figure-data export, and single-shot candidate verification.
//
// Exit codes: 0 success, 2 configuration error, 3 protocol error,
// 4 infrastructure/backend error, 1 any other failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "passk/config.hpp"
#include "passk/corpus.hpp"
#include "passk/errors.hpp"
#include "passk/experiment.hpp"
#include "passk/export_csv.hpp"
#include "passk/http_backend.hpp"
#include "passk/journal.hpp"
#include "passk/judge.hpp"
#include "passk/prompt.hpp"
#include "passk/simulate.hpp"
#include "passk/simulated_backend.hpp"
#include "passk/spread_model.hpp"
#include "passk/stats.hpp"

namespace {

using namespace passk;

std::string fmt(double value) { return csv_number(value); }

// Options shared by every experiment subcommand.
struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string backend = "simulated";
    std::string out_dir = "out";
    std::string prompts_dir = "prompts";
    std::string experiment_id;
    bool record_timing = false;
};

ExperimentConfig build_config(const GlobalOptions& global) {
    ExperimentConfig config;
    if (!global.config_path.empty()) config = load_config(global.config_path);
    if (global.seed) config.seed = *global.seed;
    if (global.workers) config.workers = *global.workers;
    if (global.backend == "simulated") {
        config.backend = BackendKind::simulated;
    } else if (global.backend == "http") {
        config.backend = BackendKind::http;
    } else {
        throw config_error("unknown backend: " + global.backend);
    }
    if (global.record_timing) config.record_timing = true;
    return config;
}

std::unique_ptr<SolverBackend> build_backend(const ExperimentConfig& config) {
    if (config.backend == BackendKind::simulated) {
        return std::make_unique<SimulatedBackend>(config.spread_w, config.seed);
    }
    return std::make_unique<HttpChatBackend>(config.endpoint);
}

std::unique_ptr<Judge> build_judge(const ExperimentConfig& config,
                                   const std::string& judge_kind) {
    std::string kind = judge_kind;
    if (kind == "auto") {
        kind = config.backend == BackendKind::simulated ? "reference" : "sandbox";
    }
    if (kind == "reference") return std::make_unique<ReferenceJudge>("cat");
    if (kind == "sandbox") return std::make_unique<SandboxJudge>(config.limits);
    throw config_error("unknown judge kind: " + kind);
}

struct RunContext {
    ExperimentConfig config;
    std::unique_ptr<SolverBackend> backend;
    std::unique_ptr<Judge> judge;
    PromptSet prompts;
    std::filesystem::path out_dir;
    std::string experiment_id;

    ExperimentContext experiment_context() {
        return {*backend,
                *judge,
                prompts,
                config,
                experiment_id,
                std::string(to_string(config.backend)),
                out_dir / (experiment_id + ".jsonl"),
                out_dir / (experiment_id + ".variants.jsonl")};
    }
};

RunContext make_run_context(const GlobalOptions& global, const std::string& judge_kind,
                            const std::string& default_id) {
    RunContext run;
    run.config = build_config(global);
    run.backend = build_backend(run.config);
    run.judge = build_judge(run.config, judge_kind);
    run.prompts = load_prompt_set(global.prompts_dir);
    run.out_dir = global.out_dir;
    std::filesystem::create_directories(run.out_dir);
    run.experiment_id = global.experiment_id.empty()
                            ? default_id + "-seed" + std::to_string(run.config.seed)
                            : global.experiment_id;
    return run;
}

std::vector<Challenge> load_or_synthesize(const std::string& corpus_dir, int synthetic_count,
                                          const ExperimentConfig& config,
                                          const std::string& difficulty, int min_cases) {
    if (!corpus_dir.empty()) {
        CorpusFilter filter;
        if (!difficulty.empty()) filter.difficulty = difficulty_from_string(difficulty);
        if (min_cases > 0) filter.min_test_cases = min_cases;
        return load_corpus(corpus_dir, filter);
    }
    return make_synthetic_corpus(synthetic_count, config.seed);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    double p0 = 0.0;
    double w = 0.2;
    int k = 1;
    long long trials = 100000;
};

int run_simulate(const GlobalOptions& global, const SimulateOptions& opt) {
    auto config = build_config(global);
    SpreadModel model(opt.p0, opt.w);
    std::cout << "p_o = " << fmt(opt.p0) << ", w = " << fmt(opt.w) << ", k = " << opt.k
              << ", trials = " << opt.trials << ", seed = " << config.seed << "\n";
    std::cout << "closed_form expected_variant_success = "
              << fmt(model.expected_variant_success()) << "\n";
    std::cout << "closed_form pass_at_k repeater = " << fmt(model.pass_at_k_repeater(opt.k))
              << "\n";
    std::cout << "closed_form pass_at_k variator = " << fmt(model.pass_at_k_variator(opt.k))
              << "\n";

    auto mc_pv = monte_carlo_expected_variant_success(model, opt.trials, config.seed);
    std::cout << "monte_carlo expected_variant_success = " << fmt(mc_pv.mean) << " (se "
              << fmt(mc_pv.standard_error) << ")\n";
    for (Agent agent : {Agent::repeater, Agent::variator}) {
        SimulationSpec spec(model);
        spec.agent = agent;
        spec.k = opt.k;
        spec.trials = opt.trials;
        spec.seed = config.seed;
        spec.workers = config.workers;
        auto estimate = simulate_pass_at_k(spec);
        std::cout << "monte_carlo pass_at_k " << to_string(agent) << " = "
                  << fmt(estimate.mean) << " (se " << fmt(estimate.standard_error) << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// test-inconsistency

struct InconsistencyOptions {
    int m = 30;
    int n = 50;
    std::string corpus_dir;
    std::string challenge_id;
    std::optional<double> latent_rate;
    std::string judge_kind = "auto";
};

int run_test_inconsistency(const GlobalOptions& global, const InconsistencyOptions& opt) {
    auto run = make_run_context(global, opt.judge_kind, "inconsistency");
    auto ctx = run.experiment_context();

    Challenge challenge;
    if (!opt.corpus_dir.empty()) {
        auto corpus = load_corpus(opt.corpus_dir);
        if (corpus.empty()) throw config_error("corpus is empty: " + opt.corpus_dir);
        if (opt.challenge_id.empty()) {
            challenge = corpus.front();
        } else {
            bool found = false;
            for (auto& c : corpus) {
                if (c.id == opt.challenge_id) {
                    challenge = c;
                    found = true;
                    break;
                }
            }
            if (!found) throw config_error("challenge not found: " + opt.challenge_id);
        }
    } else {
        challenge = make_synthetic_corpus(1, run.config.seed).front();
        if (opt.latent_rate) {
            char marker[64];
            std::snprintf(marker, sizeof(marker), "latent-rate: %.17g", *opt.latent_rate);
            challenge.statement =
                "Read every line of input and write it back unchanged.\n" +
                std::string(marker) + "\n";
        }
    }

    auto result = run_inconsistency_experiment(challenge, opt.m, opt.n, ctx);
    std::cout << "challenge = " << challenge.id << ", m = " << result.variants.size()
              << ", n = " << result.n_per_variant << "\n";
    for (const auto& v : result.variants) {
        std::cout << "variant " << v.index << ": " << v.successes << "/" << v.trials
                  << " rate " << fmt(v.rate) << " wilson [" << fmt(v.wilson.lower) << ", "
                  << fmt(v.wilson.upper) << "]\n";
    }
    std::cout << "pooled_rate = " << fmt(result.pooled_rate) << "\n";
    std::cout << "statistic = " << fmt(result.test.statistic) << "\n";
    std::cout << "p_value = " << fmt(result.test.p_value) << "\n";

    nlohmann::json summary{
        {"experiment", run.experiment_id},
        {"challenge", challenge.id},
        {"m", static_cast<int>(result.variants.size())},
        {"n", result.n_per_variant},
        {"pooled_rate", result.pooled_rate},
        {"statistic", result.test.statistic},
        {"p_value", result.test.p_value},
        {"replicates", result.test.replicates},
        {"degenerate", result.test.degenerate},
    };
    std::ofstream summary_out(run.out_dir / (run.experiment_id + ".test.json"),
                              std::ios::binary);
    summary_out << summary.dump(2) << "\n";
    if (!summary_out) throw infrastructure_error("cannot write test summary");
    return 0;
}

// ---------------------------------------------------------------------------
// run-passk

struct PasskOptions {
    std::string corpus_dir;
    int synthetic_count = 60;
    std::string difficulty;
    int min_cases = 0;
    std::string dataset_label = "simulated";
    std::string judge_kind = "auto";
    std::string estimator;
};

const char* agent_label(Agent agent) { return to_string(agent); }

int run_run_passk(const GlobalOptions& global, const PasskOptions& opt) {
    auto run = make_run_context(global, opt.judge_kind, "passk");
    if (opt.estimator == "plug_in") {
        run.config.estimator = PassAtKEstimate::Method::plug_in;
    } else if (opt.estimator == "combinatorial") {
        run.config.estimator = PassAtKEstimate::Method::combinatorial;
    } else if (!opt.estimator.empty()) {
        throw config_error("unknown estimator: " + opt.estimator);
    }
    auto ctx = run.experiment_context();
    auto corpus = load_or_synthesize(opt.corpus_dir, opt.synthetic_count, run.config,
                                     opt.difficulty, opt.min_cases);

    auto result = run_passk_experiment(corpus, ctx, opt.dataset_label);

    std::vector<std::vector<std::string>> row_cells;
    for (const auto& row : result.rows) {
        row_cells.push_back({row.dataset, row.challenge, agent_label(row.agent),
                             std::to_string(row.k), fmt(row.value)});
    }
    write_csv(run.out_dir / (run.experiment_id + ".rows.csv"),
              {"dataset", "challenge", "agent", "k", "value"}, row_cells);

    std::vector<std::vector<std::string>> mean_cells;
    for (const auto& row : result.means) {
        mean_cells.push_back(
            {row.dataset, agent_label(row.agent), std::to_string(row.k), fmt(row.value)});
    }
    write_csv(run.out_dir / (run.experiment_id + ".means.csv"),
              {"dataset", "agent", "k", "value"}, mean_cells);

    std::vector<std::vector<std::string>> excluded_cells;
    for (const auto& exclusion : result.excluded) {
        excluded_cells.push_back({exclusion.challenge, exclusion.reason});
        std::cerr << "excluded " << exclusion.challenge << ": " << exclusion.reason << "\n";
    }
    write_csv(run.out_dir / (run.experiment_id + ".exclusions.csv"),
              {"challenge", "reason"}, excluded_cells);

    for (const auto& row : result.means) {
        std::cout << row.dataset << " " << agent_label(row.agent) << " k=" << row.k << " "
                  << fmt(row.value) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// build-private

struct PrivateOptions {
    std::string corpus_dir;
    int synthetic_count = 60;
    std::string judge_kind = "auto";
};

int run_build_private(const GlobalOptions& global, const PrivateOptions& opt) {
    auto run = make_run_context(global, opt.judge_kind, "private");
    auto ctx = run.experiment_context();
    auto corpus = load_or_synthesize(opt.corpus_dir, opt.synthetic_count, run.config, "", 0);

    auto results = run_private_batch(corpus, ctx);
    std::vector<std::vector<std::string>> cells;
    for (const auto& result : results) {
        cells.push_back({result.challenge, std::to_string(result.dataset.median_index),
                         fmt(result.dataset.median_rate), fmt(result.dataset.p_v_hat)});
    }
    write_csv(run.out_dir / (run.experiment_id + ".private.csv"),
              {"challenge", "median_index", "p_o_hat", "p_v_hat"}, cells);
    std::cout << "private dataset rows: " << cells.size() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// export

struct ExportOptions {
    std::string kind;
    std::vector<std::string> experiments;
    std::string labels;
    std::string challenge_id;
    int bins = 20;
    double w = 0.2;
    std::vector<int> k_values{1, 5, 10};
    std::string prefix;
};

std::filesystem::path require_artifact(const std::filesystem::path& path,
                                       const std::string& experiment) {
    if (!std::filesystem::exists(path)) {
        throw config_error("unknown experiment id " + experiment + ": missing " +
                           path.string());
    }
    return path;
}

// Per-variant success counts for one challenge of one journal.
struct VariantTally {
    std::vector<long long> successes;
    int trials_per_variant = 0;
    double pooled = 0.0;
};

VariantTally tally_variants_from_journal(const std::filesystem::path& journal_path,
                                         const std::string& challenge_filter) {
    auto records = read_journal(journal_path);
    std::string challenge = challenge_filter;
    if (challenge.empty()) {
        for (const auto& record : records) {
            if (challenge.empty()) {
                challenge = record.key.challenge_id;
            } else if (challenge != record.key.challenge_id) {
                throw config_error(
                    "journal covers multiple challenges; pass --challenge to pick one");
            }
        }
    }
    std::map<int, std::pair<long long, int>> per_variant;  // index -> (successes, trials)
    for (const auto& record : records) {
        if (record.key.challenge_id != challenge) continue;
        int index = detail::variant_index_of_task(record.key.task);
        if (index < 0) continue;
        auto& cell = per_variant[index];
        cell.first += record.outcome == Outcome::pass ? 1 : 0;
        ++cell.second;
    }
    VariantTally tally;
    long long total_successes = 0;
    long long total_trials = 0;
    for (const auto& [index, cell] : per_variant) {
        if (tally.trials_per_variant == 0) tally.trials_per_variant = cell.second;
        if (cell.second != tally.trials_per_variant) {
            throw protocol_error("variants have unequal candidate counts in " +
                                 journal_path.string());
        }
        tally.successes.push_back(cell.first);
        total_successes += cell.first;
        total_trials += cell.second;
    }
    tally.pooled = total_trials > 0
                       ? static_cast<double>(total_successes) / static_cast<double>(total_trials)
                       : 0.0;
    return tally;
}

int run_export(const GlobalOptions& global, const ExportOptions& opt) {
    std::filesystem::path out_dir = global.out_dir;
    std::filesystem::create_directories(out_dir);

    if (opt.kind == "theory") {
        std::string prefix = opt.prefix.empty() ? "theory" : opt.prefix;
        export_theory_csv(out_dir / (prefix + ".csv"), opt.w, opt.k_values);
        std::cout << "wrote " << (out_dir / (prefix + ".csv")).string() << "\n";
        return 0;
    }

    if (opt.kind == "histogram") {
        if (opt.experiments.size() != 1) {
            throw config_error("histogram export needs exactly one --experiment");
        }
        const std::string& experiment = opt.experiments[0];
        auto journal =
            require_artifact(out_dir / (experiment + ".jsonl"), experiment);
        auto tally = tally_variants_from_journal(journal, opt.challenge_id);
        auto target = out_dir / (experiment + ".histogram.csv");
        if (tally.successes.empty()) {
            write_csv(target, {"successes", "observed_variants", "null_pmf"}, {});
        } else {
            export_histogram_csv(target, tally.successes, tally.trials_per_variant,
                                 tally.pooled);
        }
        std::cout << "wrote " << target.string() << "\n";
        return 0;
    }

    if (opt.kind == "guidance") {
        if (opt.experiments.empty()) {
            throw config_error("guidance export needs at least one --experiment");
        }
        auto labels = detail::split_commas(opt.labels);
        if (!labels.empty() && labels.size() != opt.experiments.size()) {
            throw config_error("--labels count must match --experiment count");
        }
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        for (std::size_t i = 0; i < opt.experiments.size(); ++i) {
            const std::string& experiment = opt.experiments[i];
            auto journal =
                require_artifact(out_dir / (experiment + ".jsonl"), experiment);
            auto tally = tally_variants_from_journal(journal, opt.challenge_id);
            std::vector<double> rates;
            for (long long s : tally.successes) {
                rates.push_back(static_cast<double>(s) / tally.trials_per_variant);
            }
            groups.emplace_back(labels.empty() ? experiment : labels[i], std::move(rates));
        }
        std::string prefix = opt.prefix.empty() ? "guidance" : opt.prefix;
        export_guidance_csv(out_dir / (prefix + ".csv"), out_dir / (prefix + ".iou.csv"),
                            groups, opt.bins);
        std::cout << "wrote " << (out_dir / (prefix + ".csv")).string() << " and "
                  << (out_dir / (prefix + ".iou.csv")).string() << "\n";
        return 0;
    }

    if (opt.kind == "scatter") {
        if (opt.experiments.size() != 1) {
            throw config_error("scatter export needs exactly one --experiment");
        }
        const std::string& experiment = opt.experiments[0];
        auto source =
            require_artifact(out_dir / (experiment + ".private.csv"), experiment);
        std::ifstream in(source);
        std::string line;
        std::vector<ScatterPoint> points;
        bool header = true;
        while (std::getline(in, line)) {
            if (header) {
                header = false;
                continue;
            }
            std::stringstream stream(line);
            std::string challenge, median, po, pv;
            std::getline(stream, challenge, ',');
            std::getline(stream, median, ',');
            std::getline(stream, po, ',');
            std::getline(stream, pv, ',');
            if (po.empty() || pv.empty()) continue;
            points.push_back({challenge, std::stod(po), std::stod(pv)});
        }
        export_scatter_csv(out_dir / (experiment + ".scatter.csv"),
                           out_dir / (experiment + ".curve.csv"), points);
        std::cout << "wrote " << (out_dir / (experiment + ".scatter.csv")).string()
                  << " and " << (out_dir / (experiment + ".curve.csv")).string() << "\n";
        return 0;
    }

    throw config_error("unknown export kind: " + opt.kind);
}

// ---------------------------------------------------------------------------
// verify-candidate

struct VerifyOptions {
    std::string challenge_file;
    std::string raw_file;
    std::string program_file;
    double time_per_case = 0.0;
    long long memory_mb = 0;
    std::vector<std::string> interpreter;
    bool run_all_cases = false;
};

int run_verify_candidate(const GlobalOptions& global, const VerifyOptions& opt) {
    auto config = build_config(global);
    if (opt.time_per_case > 0.0) config.limits.time_per_case = opt.time_per_case;
    if (opt.memory_mb > 0) {
        config.limits.memory_bytes = static_cast<std::uint64_t>(opt.memory_mb) << 20;
    }
    if (!opt.interpreter.empty()) config.limits.interpreter = opt.interpreter;
    if (opt.run_all_cases) config.limits.run_all_cases = true;

    std::ifstream challenge_in(opt.challenge_file);
    if (!challenge_in) throw config_error("cannot open challenge " + opt.challenge_file);
    nlohmann::json challenge_json =
        nlohmann::json::parse(challenge_in, nullptr, false);
    if (challenge_json.is_discarded()) {
        throw config_error("challenge file is not valid JSON: " + opt.challenge_file);
    }
    Challenge challenge = parse_challenge_json(challenge_json);

    if (opt.raw_file.empty() == opt.program_file.empty()) {
        throw config_error("pass exactly one of --raw or --program");
    }
    CandidateSolution candidate;
    if (!opt.raw_file.empty()) {
        std::ifstream raw_in(opt.raw_file, std::ios::binary);
        if (!raw_in) throw config_error("cannot open raw output " + opt.raw_file);
        std::stringstream raw_buffer;
        raw_buffer << raw_in.rdbuf();
        candidate = extract_solution(raw_buffer.str(), challenge.id);
    } else {
        std::ifstream program_in(opt.program_file, std::ios::binary);
        if (!program_in) throw config_error("cannot open program " + opt.program_file);
        std::stringstream program_buffer;
        program_buffer << program_in.rdbuf();
        candidate.task_ref = challenge.id;
        candidate.raw_output = program_buffer.str();
        candidate.program = program_buffer.str();
        candidate.extraction_ok = !candidate.program.empty();
    }

    Verdict verdict = run_candidate(candidate, challenge.test_suite, config.limits);
    std::cout << "outcome: " << to_string(verdict.outcome) << "\n";
    for (std::size_t i = 0; i < verdict.per_case.size(); ++i) {
        std::cout << "case " << i << ": " << to_string(verdict.per_case[i]) << "\n";
    }
    return verdict.outcome == Outcome::pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pass@k experimentation toolkit: repeater and variator agents, "
                 "inconsistency testing, and sandboxed solution verification"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--config", global.config_path, "key=value config file");
    app.add_option("--seed", global.seed, "experiment seed (overrides config)");
    app.add_option("--workers", global.workers, "worker threads (overrides config)");
    app.add_option("--backend", global.backend, "solver backend: simulated or http")
        ->check(CLI::IsMember({"simulated", "http"}));
    app.add_option("--out", global.out_dir, "output directory for journals and CSVs");
    app.add_option("--prompts", global.prompts_dir, "prompt template directory");
    app.add_option("--experiment-id", global.experiment_id,
                   "artifact name stem (default derives from the subcommand and seed)");
    app.add_flag("--record-timing", global.record_timing,
                 "record wall time per candidate (forfeits byte-identical journals)");

    int exit_code = 0;
    auto guard = [&exit_code](auto&& body) {
        return [&exit_code, body]() {
            try {
                exit_code = body();
            } catch (const config_error& e) {
                std::cerr << "config error: " << e.what() << "\n";
                exit_code = 2;
            } catch (const protocol_error& e) {
                std::cerr << "protocol error: " << e.what() << "\n";
                exit_code = 3;
            } catch (const backend_error& e) {
                std::cerr << "backend error: " << e.what() << "\n";
                exit_code = 4;
            } catch (const infrastructure_error& e) {
                std::cerr << "infrastructure error: " << e.what() << "\n";
                exit_code = 4;
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                exit_code = 1;
            }
        };
    };

    auto* simulate_cmd = app.add_subcommand(
        "simulate", "closed forms and Monte-Carlo estimates for the spread model");
    auto simulate_opt = std::make_shared<SimulateOptions>();
    simulate_cmd->add_option("--p0", simulate_opt->p0, "original success rate")
        ->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--w", simulate_opt->w, "spread half-width in (0, 0.5)");
    simulate_cmd->add_option("--k", simulate_opt->k, "candidate budget");
    simulate_cmd->add_option("--trials", simulate_opt->trials, "Monte-Carlo trials");
    simulate_cmd->callback(guard([&global, simulate_opt] {
        return run_simulate(global, *simulate_opt);
    }));

    auto* inco_cmd = app.add_subcommand(
        "test-inconsistency", "variant-success dispersion test against the binomial null");
    auto inco_opt = std::make_shared<InconsistencyOptions>();
    inco_cmd->add_option("--m", inco_opt->m, "number of variants");
    inco_cmd->add_option("--n", inco_opt->n, "candidates per variant");
    inco_cmd->add_option("--corpus", inco_opt->corpus_dir, "challenge corpus directory");
    inco_cmd->add_option("--challenge", inco_opt->challenge_id, "challenge id to test");
    inco_cmd->add_option("--p0", inco_opt->latent_rate,
                         "latent original rate for the synthetic challenge")
        ->check(CLI::Range(0.0, 1.0));
    inco_cmd->add_option("--judge", inco_opt->judge_kind, "judge: auto, sandbox, reference");
    inco_cmd->callback(guard([&global, inco_opt] {
        return run_test_inconsistency(global, *inco_opt);
    }));

    auto* passk_cmd = app.add_subcommand(
        "run-passk", "repeater-vs-variator Pass@k protocol over a challenge set");
    auto passk_opt = std::make_shared<PasskOptions>();
    passk_cmd->add_option("--corpus", passk_opt->corpus_dir, "challenge corpus directory");
    passk_cmd->add_option("--count", passk_opt->synthetic_count,
                          "synthetic challenge count when no corpus is given");
    passk_cmd->add_option("--difficulty", passk_opt->difficulty,
                          "corpus difficulty filter");
    passk_cmd->add_option("--min-cases", passk_opt->min_cases,
                          "corpus minimum test-case filter");
    passk_cmd->add_option("--dataset-label", passk_opt->dataset_label,
                          "dataset column value in emitted CSVs");
    passk_cmd->add_option("--judge", passk_opt->judge_kind, "judge: auto, sandbox, reference");
    passk_cmd->add_option("--estimator", passk_opt->estimator,
                          "pass@k estimator: plug_in or combinatorial");
    passk_cmd->callback(guard([&global, passk_opt] {
        return run_run_passk(global, *passk_opt);
    }));

    auto* private_cmd = app.add_subcommand(
        "build-private", "reconstitute private datasets via the median-variant rule");
    auto private_opt = std::make_shared<PrivateOptions>();
    private_cmd->add_option("--corpus", private_opt->corpus_dir, "challenge corpus directory");
    private_cmd->add_option("--count", private_opt->synthetic_count,
                            "synthetic challenge count when no corpus is given");
    private_cmd->add_option("--judge", private_opt->judge_kind,
                            "judge: auto, sandbox, reference");
    private_cmd->callback(guard([&global, private_opt] {
        return run_build_private(global, *private_opt);
    }));

    auto* export_cmd =
        app.add_subcommand("export", "plot-ready CSVs from persisted experiments");
    auto export_opt = std::make_shared<ExportOptions>();
    export_cmd
        ->add_option("--kind", export_opt->kind,
                     "histogram, guidance, scatter, or theory")
        ->required();
    export_cmd->add_option("--experiment", export_opt->experiments,
                           "experiment id(s) under --out");
    export_cmd->add_option("--labels", export_opt->labels,
                           "comma-separated labels matching --experiment order");
    export_cmd->add_option("--challenge", export_opt->challenge_id,
                           "challenge filter for multi-challenge journals");
    export_cmd->add_option("--bins", export_opt->bins, "histogram bin count");
    export_cmd->add_option("--w", export_opt->w, "spread half-width for theory curves");
    export_cmd->add_option("--k", export_opt->k_values, "k values for theory curves");
    export_cmd->add_option("--prefix", export_opt->prefix, "output file stem");
    export_cmd->callback(guard([&global, export_opt] {
        return run_export(global, *export_opt);
    }));

    auto* verify_cmd =
        app.add_subcommand("verify-candidate", "judge one candidate against one challenge");
    auto verify_opt = std::make_shared<VerifyOptions>();
    verify_cmd->add_option("--challenge", verify_opt->challenge_file, "challenge JSON file")
        ->required();
    verify_cmd->add_option("--raw", verify_opt->raw_file,
                           "model output containing solution tags");
    verify_cmd->add_option("--program", verify_opt->program_file, "bare program file");
    verify_cmd->add_option("--time", verify_opt->time_per_case, "wall seconds per case");
    verify_cmd->add_option("--memory-mb", verify_opt->memory_mb, "memory ceiling in MiB");
    verify_cmd->add_option("--interpreter", verify_opt->interpreter,
                           "interpreter argv prefix (repeatable)");
    verify_cmd->add_flag("--all-cases", verify_opt->run_all_cases,
                         "run every case instead of stopping at the first failure");
    verify_cmd->callback(guard([&global, verify_opt] {
        return run_verify_candidate(global, *verify_opt);
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int parse_code = app.exit(e);
        return parse_code == 0 ? 0 : 2;
    }
    return exit_code;
}
