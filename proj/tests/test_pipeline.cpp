// Journal persistence, config parsing, the experiment protocols with the
// simulated backend, and CSV export.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "passk/config.hpp"
#include "passk/errors.hpp"
#include "passk/experiment.hpp"
#include "passk/export_csv.hpp"
#include "passk/journal.hpp"
#include "passk/simulated_backend.hpp"

using namespace passk;

namespace {

const std::filesystem::path kPromptDir = PASSK_PROMPT_DIR;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "passk-test-XXXXXX");
        std::vector<char> buffer(tmpl.begin(), tmpl.end());
        buffer.push_back('\0');
        REQUIRE(mkdtemp(buffer.data()) != nullptr);
        path = buffer.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

ResultRecord sample_record(int candidate) {
    ResultRecord r;
    r.experiment = "exp-1";
    r.key = {"ch-1", "original", candidate};
    r.outcome = Outcome::pass;
    r.cases_run = 3;
    r.cases_passed = 3;
    r.backend = "simulated";
    r.job_seed = seed_hex(0xabcdef);
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

Challenge marker_challenge(const std::string& id, double rate) {
    Challenge c;
    c.id = id;
    c.title = "challenge " + id;
    char marker[64];
    std::snprintf(marker, sizeof(marker), "latent-rate: %.17g", rate);
    c.statement = "Echo the input.\n" + std::string(marker) + "\n";
    for (int i = 0; i < 2; ++i) {
        std::string payload = "case-" + std::to_string(i) + "\n";
        c.test_suite.cases.push_back({payload, payload});
    }
    return c;
}

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.seed = 2024;
    config.workers = 2;
    config.original_candidates = 12;
    config.variant_count = 4;
    config.candidates_per_variant = 3;
    config.private_candidates_per_variant = 5;
    config.k_values = {1, 2};
    config.replicates = 2000;
    config.spread_w = 0.3;
    return config;
}

struct Harness {
    TempDir dir;
    SimulatedBackend backend;
    ReferenceJudge judge;
    PromptSet prompts;
    ExperimentContext ctx;

    explicit Harness(ExperimentConfig config, const std::string& experiment = "exp")
        : backend(config.spread_w, config.seed),
          judge("cat"),
          prompts(load_prompt_set(kPromptDir)),
          ctx{backend,
              judge,
              prompts,
              config,
              experiment,
              "simulated",
              dir.path / (experiment + ".jsonl"),
              dir.path / (experiment + ".variants.jsonl")} {}
};

}  // namespace

// ---------------------------------------------------------------------------
// Journal

TEST_CASE("result records survive a serialization round trip") {
    ResultRecord r = sample_record(7);
    r.outcome = Outcome::memory_exceeded;
    r.wall_time = 1.25;
    ResultRecord back = record_from_line(record_to_line(r));
    CHECK(back.experiment == r.experiment);
    CHECK(back.key.to_string() == r.key.to_string());
    CHECK(back.outcome == r.outcome);
    CHECK(back.cases_run == r.cases_run);
    CHECK(back.cases_passed == r.cases_passed);
    CHECK(back.wall_time == r.wall_time);
    CHECK(back.backend == r.backend);
    CHECK(back.job_seed == r.job_seed);

    CHECK_THROWS_AS(record_from_line("not json"), config_error);
    CHECK_THROWS_AS(record_from_line("{\"experiment\":\"x\"}"), config_error);
}

TEST_CASE("seed hex is fixed width lowercase") {
    CHECK(seed_hex(0) == "0000000000000000");
    CHECK(seed_hex(0x123456789abcdef0ull) == "123456789abcdef0");
    CHECK(seed_hex(0xffffffffffffffffull) == "ffffffffffffffff");
}

TEST_CASE("journal writer releases records in plan order") {
    TempDir dir;
    auto path = dir.path / "out.jsonl";
    {
        JournalWriter writer(path);
        CHECK(writer.existing_records() == 0);
        writer.submit(2, sample_record(2));
        writer.submit(0, sample_record(0));
        CHECK_FALSE(writer.complete_through(3));
        writer.submit(1, sample_record(1));
        CHECK(writer.complete_through(3));
    }
    auto records = read_journal(path);
    REQUIRE(records.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(records[i].key.candidate_index == i);

    JournalWriter resumed(path);
    CHECK(resumed.existing_records() == 3);
    CHECK_THROWS_AS(resumed.submit(1, sample_record(1)), protocol_error);
    resumed.submit(3, sample_record(3));
    CHECK(read_journal(path).size() == 4);
}

TEST_CASE("torn trailing lines are dropped on reopen and tolerated on read") {
    TempDir dir;
    auto path = dir.path / "torn.jsonl";
    spit(path, record_to_line(sample_record(0)) + "\n" + record_to_line(sample_record(1)) +
                   "\n{\"experiment\":\"exp-1\",\"chal");
    CHECK(read_journal(path).size() == 2);

    JournalWriter writer(path);
    CHECK(writer.existing_records() == 2);
    std::string contents = slurp(path);
    CHECK(contents.back() == '\n');
    CHECK(contents.find("chal\"") == std::string::npos);

    spit(dir.path / "bad.jsonl", "garbage line\n");
    CHECK_THROWS_AS(read_journal(dir.path / "bad.jsonl"), config_error);
}

// ---------------------------------------------------------------------------
// Config

TEST_CASE("config validation enforces the strict candidate parity") {
    ExperimentConfig config;
    CHECK_NOTHROW(config.validate());  // defaults: 150 == 25 * 6

    config.candidates_per_variant = 7;
    CHECK_THROWS_AS(config.validate(), config_error);
    config.strict_protocol = false;
    CHECK_NOTHROW(config.validate());

    config = {};
    config.workers = 0;
    CHECK_THROWS_AS(config.validate(), config_error);
    config = {};
    config.k_values = {};
    CHECK_THROWS_AS(config.validate(), config_error);
    config = {};
    config.k_values = {1, 0};
    CHECK_THROWS_AS(config.validate(), config_error);
    config = {};
    config.replicates = 10;
    CHECK_THROWS_AS(config.validate(), config_error);
    config = {};
    config.spread_w = 0.5;
    CHECK_THROWS_AS(config.validate(), config_error);
    config = {};
    config.spread_w = 0.0;  // consistent world is allowed
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config files parse key=value lines and reject unknown keys") {
    TempDir dir;
    auto path = dir.path / "run.cfg";
    spit(path,
         "# comment\n"
         "seed = 99\n"
         "workers=3\n"
         "\n"
         "k_values = 1, 5, 10\n"
         "replicates = 5000\n"
         "memory_mb = 64\n"
         "interpreter = /bin/sh,-c\n"
         "estimator = combinatorial\n"
         "backend = simulated\n"
         "spread_w = 0.25\n"
         "record_timing = true\n"
         "system_prompt = keep = signs intact\n");
    auto config = load_config(path);
    CHECK(config.seed == 99);
    CHECK(config.workers == 3);
    CHECK(config.k_values == std::vector<int>{1, 5, 10});
    CHECK(config.replicates == 5000);
    CHECK(config.limits.memory_bytes == 64ull << 20);
    CHECK(config.limits.interpreter == std::vector<std::string>{"/bin/sh", "-c"});
    CHECK(config.estimator == PassAtKEstimate::Method::combinatorial);
    CHECK(config.spread_w == 0.25);
    CHECK(config.record_timing);
    CHECK(config.endpoint.system_prompt == "keep = signs intact");

    spit(path, "no_such_key = 1\n");
    try {
        load_config(path);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        std::string what = e.what();
        CHECK(what.find("no_such_key") != std::string::npos);
        CHECK(what.find(":1") != std::string::npos);
    }

    spit(path, "workers\n");
    CHECK_THROWS_AS(load_config(path), config_error);
    spit(path, "workers = three\n");
    CHECK_THROWS_AS(load_config(path), config_error);
    spit(path, "strict_protocol = maybe\n");
    CHECK_THROWS_AS(load_config(path), config_error);
    spit(path, "backend = carrier-pigeon\n");
    CHECK_THROWS_AS(load_config(path), config_error);
    CHECK_THROWS_AS(load_config(dir.path / "absent.cfg"), config_error);

    spit(path, "seed = 1\nseed = 2\n");
    CHECK(load_config(path).seed == 2);
}

// ---------------------------------------------------------------------------
// Synthetic corpus

TEST_CASE("synthetic corpus is deterministic with embedded rate markers") {
    auto corpus = make_synthetic_corpus(5, 42);
    REQUIRE(corpus.size() == 5);
    CHECK(corpus[0].id == "sim-000");
    CHECK(corpus[4].id == "sim-004");
    for (const auto& challenge : corpus) {
        CHECK(challenge.statement.find("latent-rate: ") != std::string::npos);
        REQUIRE(challenge.test_suite.cases.size() == 3);
        CHECK(challenge.test_suite.cases[0].input ==
              challenge.test_suite.cases[0].expected_output);
    }
    auto again = make_synthetic_corpus(5, 42);
    CHECK(again[3].statement == corpus[3].statement);
    auto other = make_synthetic_corpus(5, 43);
    CHECK(other[3].statement != corpus[3].statement);
    CHECK_THROWS_AS(make_synthetic_corpus(0, 1), domain_error);
}

// ---------------------------------------------------------------------------
// Worker pool

TEST_CASE("indexed job pool covers every index once and propagates errors") {
    std::vector<std::atomic<int>> hits(100);
    run_indexed_jobs(100, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);

    CHECK_THROWS_AS(run_indexed_jobs(10, 4,
                                     [&](std::size_t i) {
                                         if (i == 3) throw protocol_error("boom");
                                     }),
                    protocol_error);
    CHECK_THROWS_AS(run_indexed_jobs(1, 0, [](std::size_t) {}), domain_error);
    run_indexed_jobs(0, 4, [](std::size_t) { FAIL("no jobs expected"); });
}

// ---------------------------------------------------------------------------
// Variant store

TEST_CASE("variant store persists complete groups and drops partial ones") {
    TempDir dir;
    auto path = dir.path / "variants.jsonl";
    std::vector<Variant> group(2);
    group[0] = {"ch-1", 0, "Alpha", "body a", {}, Equivalence::unknown};
    group[1] = {"ch-1", 1, "Beta", "body b", {}, Equivalence::unknown};
    {
        VariantStore store(path);
        CHECK_FALSE(store.find("ch-1").has_value());
        store.append("ch-1", group);
        auto found = store.find("ch-1");
        REQUIRE(found.has_value());
        CHECK((*found)[1].title == "Beta");
    }
    {
        VariantStore reopened(path);
        auto found = reopened.find("ch-1");
        REQUIRE(found.has_value());
        CHECK((*found)[0].statement == "body a");
    }
    // Simulate a crash mid-group: header promises 2 variants, only 1 written.
    std::string intact = slurp(path);
    spit(path, intact + "{\"challenge\":\"ch-2\",\"count\":2}\n" +
                   "{\"challenge\":\"ch-2\",\"index\":0,\"title\":\"T\",\"statement\":\"s\"}\n");
    {
        VariantStore reopened(path);
        CHECK(reopened.find("ch-1").has_value());
        CHECK_FALSE(reopened.find("ch-2").has_value());
    }
    CHECK(slurp(path) == intact);
}

// ---------------------------------------------------------------------------
// Pass@k experiment

TEST_CASE("passk experiment runs the strict plan and aggregates from the journal") {
    auto config = small_config();
    Harness h(config);

    std::vector<Challenge> corpus{marker_challenge("fix-hi", 1.0),
                                  marker_challenge("fix-lo", 0.0),
                                  marker_challenge("fix-mid", 0.6)};
    auto result = run_passk_experiment(corpus, h.ctx, "simulated");

    const std::size_t jobs_per_challenge = 12 + 4 * 3;
    auto records = read_journal(h.ctx.journal_path);
    CHECK(records.size() == corpus.size() * jobs_per_challenge);
    CHECK(result.rows.size() == corpus.size() * config.k_values.size() * 2);
    CHECK(result.means.size() == config.k_values.size() * 2);
    CHECK(result.excluded.empty());

    // Challenge with latent rate 1: every original candidate passes.
    REQUIRE(result.estimates.size() == 3);
    const auto& hi = result.estimates[0];
    CHECK(hi.challenge == "fix-hi");
    CHECK(hi.original_trials == 12);
    CHECK(hi.original_successes == 12);
    CHECK(hi.p_o_hat == 1.0);
    CHECK(hi.variant_trials == 12);

    // Challenge with latent rate 0: repeater rows are exactly 0.
    const auto& lo = result.estimates[1];
    CHECK(lo.p_o_hat == 0.0);
    for (const auto& row : result.rows) {
        if (row.challenge == "fix-lo" && row.agent == Agent::repeater) {
            CHECK(row.value == 0.0);
        }
        CHECK(row.value >= 0.0);
        CHECK(row.value <= 1.0);
    }

    // Dataset means are the unweighted average of per-challenge rows.
    for (const auto& mean : result.means) {
        double sum = 0.0;
        int seen = 0;
        for (const auto& row : result.rows) {
            if (row.agent == mean.agent && row.k == mean.k) {
                sum += row.value;
                ++seen;
            }
        }
        REQUIRE(seen == 3);
        CHECK(mean.value == Catch::Approx(sum / 3).margin(1e-12));
    }
}

TEST_CASE("empty-suite challenges are excluded with a reason") {
    auto config = small_config();
    Harness h(config);
    Challenge empty = marker_challenge("no-tests", 0.5);
    empty.test_suite.cases.clear();
    std::vector<Challenge> corpus{marker_challenge("ok", 0.5), empty};
    auto result = run_passk_experiment(corpus, h.ctx, "simulated");
    REQUIRE(result.excluded.size() == 1);
    CHECK(result.excluded[0].challenge == "no-tests");
    CHECK(result.excluded[0].reason == "no test cases");
    CHECK(result.estimates.size() == 1);
    for (const auto& row : result.rows) CHECK(row.challenge == "ok");
}

TEST_CASE("journals are byte-identical across worker counts and resumable") {
    auto config = small_config();
    std::vector<Challenge> corpus{marker_challenge("alpha", 0.8),
                                  marker_challenge("beta", 0.25)};

    std::string baseline;
    {
        Harness h(config);
        run_passk_experiment(corpus, h.ctx, "simulated");
        baseline = slurp(h.ctx.journal_path);
    }
    for (unsigned workers : {1u, 5u}) {
        auto tweaked = config;
        tweaked.workers = workers;
        Harness h(tweaked);
        run_passk_experiment(corpus, h.ctx, "simulated");
        CHECK(slurp(h.ctx.journal_path) == baseline);
    }

    // Resume after an interruption: keep a prefix, rerun, same bytes.
    {
        Harness h(config);
        std::size_t cut = 0;
        for (int newline = 0; newline < 17; ++cut) {
            if (baseline[cut] == '\n') ++newline;
        }
        spit(h.ctx.journal_path, baseline.substr(0, cut) + "{\"torn\":");
        auto result = run_passk_experiment(corpus, h.ctx, "simulated");
        CHECK(slurp(h.ctx.journal_path) == baseline);
        CHECK(result.estimates.size() == 2);
    }

    // A journal from a different plan is rejected, not silently overwritten.
    {
        Harness h(config);
        std::vector<Challenge> other{marker_challenge("gamma", 0.5)};
        run_passk_experiment(other, h.ctx, "simulated");
        CHECK_THROWS_AS(run_passk_experiment(corpus, h.ctx, "simulated"), protocol_error);
    }
}

// ---------------------------------------------------------------------------
// Inconsistency experiment

TEST_CASE("inconsistency experiment produces per-variant stats and a p-value") {
    auto config = small_config();
    Harness h(config, "inco");
    Challenge challenge = marker_challenge("inc-1", 0.5);

    auto result = run_inconsistency_experiment(challenge, 6, 30, h.ctx);
    REQUIRE(result.variants.size() == 6);
    CHECK(result.n_per_variant == 30);
    long long total = 0;
    for (const auto& v : result.variants) {
        CHECK(v.trials == 30);
        CHECK(v.successes >= 0);
        CHECK(v.successes <= 30);
        CHECK(v.rate == Catch::Approx(static_cast<double>(v.successes) / 30));
        CHECK(v.wilson.lower <= v.rate);
        CHECK(v.wilson.upper >= v.rate);
        total += v.successes;
    }
    CHECK(result.pooled_rate == Catch::Approx(static_cast<double>(total) / 180));
    CHECK(result.test.p_value > 0.0);
    CHECK(result.test.p_value <= 1.0);
    CHECK(read_journal(h.ctx.journal_path).size() == 180);

    CHECK_THROWS_AS(run_inconsistency_experiment(challenge, 1, 30, h.ctx), protocol_error);
    CHECK_THROWS_AS(run_inconsistency_experiment(challenge, 6, 0, h.ctx), domain_error);
}

TEST_CASE("rejected variants are skipped when a reviewed pool is supplied") {
    auto config = small_config();
    Harness h(config, "rev");
    Challenge challenge = marker_challenge("rev-1", 0.5);

    std::vector<Variant> reviewed(4);
    for (int i = 0; i < 4; ++i) {
        reviewed[i] = {"rev-1", i, "T" + std::to_string(i),
                       challenge.statement, {}, Equivalence::approved};
    }
    reviewed[2].equivalence = Equivalence::rejected;
    auto result = run_inconsistency_experiment(challenge, 4, 10, h.ctx, &reviewed);
    REQUIRE(result.variants.size() == 3);
    for (const auto& v : result.variants) CHECK(v.index != 2);
    CHECK(read_journal(h.ctx.journal_path).size() == 30);
}

// ---------------------------------------------------------------------------
// Private dataset

TEST_CASE("private dataset selects the median variant with lowest-index ties") {
    std::vector<long long> ascending(25);
    for (int i = 0; i < 25; ++i) ascending[i] = i;  // distinct rates over 25 trials
    auto dataset = build_private_dataset(ascending, 25, 25);
    CHECK(dataset.median_index == 12);  // 13th of 25 in ascending order
    CHECK(dataset.median_rate == Catch::Approx(12.0 / 25.0));
    double rest = (25.0 * 24.0 / 2.0 - 12.0) / (24.0 * 25.0);
    CHECK(dataset.p_v_hat == Catch::Approx(rest));

    std::vector<long long> tied(25, 10);
    CHECK(build_private_dataset(tied, 20, 25).median_index == 0);

    std::vector<long long> even{3, 1, 2, 4};
    // Ascending rates: 1,2,3,4 -> rank ceil(4/2)=2 -> rate 2 -> index 2.
    CHECK(build_private_dataset(even, 10, 4).median_index == 2);

    CHECK_THROWS_AS(build_private_dataset({1, 2, 3}, 10, 25), protocol_error);
    CHECK_THROWS_AS(build_private_dataset({1, 12}, 10, 2), domain_error);
}

TEST_CASE("private experiment runs 25x20 and reconstitutes the dataset") {
    auto config = small_config();
    config.variant_count = 25;
    config.candidates_per_variant = 6;
    config.original_candidates = 150;
    Harness h(config, "priv");
    Challenge challenge = marker_challenge("priv-1", 0.5);

    auto result = run_private_experiment(challenge, h.ctx);
    CHECK(read_journal(h.ctx.journal_path).size() == 25 * 5);
    REQUIRE(result.dataset.rates.size() == 25);
    CHECK(result.dataset.median_index >= 0);
    CHECK(result.dataset.median_index < 25);
    CHECK(result.variants.size() == 25);
    double sum = 0.0;
    for (int i = 0; i < 25; ++i) {
        if (i != result.dataset.median_index) sum += result.dataset.rates[i];
    }
    CHECK(result.dataset.p_v_hat == Catch::Approx(sum / 24.0));
}

// ---------------------------------------------------------------------------
// CSV export

TEST_CASE("csv escaping follows the quoting rules") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("with,comma") == "\"with,comma\"");
    CHECK(csv_escape("quote\"inside") == "\"quote\"\"inside\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_number(0.5) == "0.5");
    CHECK(csv_number(0.4012630607616213) == "0.401263060762");
}

TEST_CASE("histogram export writes observed counts and the null pmf") {
    TempDir dir;
    auto path = dir.path / "hist.csv";
    export_histogram_csv(path, {2, 2, 5, 0}, 5, 0.45);
    auto rows = parse_csv(slurp(path));
    REQUIRE(rows.size() == 7);  // header + successes 0..5
    CHECK(rows[0] == std::vector<std::string>{"successes", "observed_variants", "null_pmf"});
    CHECK(rows[1][1] == "1");  // one variant with zero successes
    CHECK(rows[3][1] == "2");  // two variants with two successes
    CHECK(rows[6][1] == "1");
    auto pmf = null_success_pmf(5, 0.45);
    for (int s = 0; s <= 5; ++s) CHECK(rows[s + 1][2] == csv_number(pmf[s]));
}

TEST_CASE("guidance export writes normalized masses and pairwise IoU") {
    TempDir dir;
    auto dist = dir.path / "dist.csv";
    auto iou = dir.path / "iou.csv";
    std::vector<double> a{0.05, 0.15, 0.15, 0.25};
    std::vector<double> b{0.55, 0.65, 0.75, 0.85};
    export_guidance_csv(dist, iou, {{"none", a}, {"hint", b}}, 10);

    auto rows = parse_csv(slurp(dist));
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == std::vector<std::string>{"bin_low", "bin_high", "none", "hint"});
    CHECK(rows[2][2] == "0.5");  // two of four "none" rates in [0.1, 0.2)
    double mass = 0.0;
    for (int r = 1; r <= 10; ++r) mass += std::stod(rows[r][2]);
    CHECK(mass == Catch::Approx(1.0));

    auto iou_rows = parse_csv(slurp(iou));
    REQUIRE(iou_rows.size() == 2);
    CHECK(iou_rows[1][0] == "none");
    CHECK(iou_rows[1][1] == "hint");
    CHECK(std::stod(iou_rows[1][2]) == Catch::Approx(histogram_iou(a, b, 10)));
}

TEST_CASE("monotone cubic interpolation passes through knots and stays monotone") {
    std::vector<double> xs{0.0, 0.2, 0.5, 0.9};
    std::vector<double> ys{0.1, 0.3, 0.35, 0.8};
    MonotoneCubic curve(xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(curve(xs[i]) == Catch::Approx(ys[i]).margin(1e-12));
    }
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        double y = curve(i / 200.0);
        CHECK(y >= prev - 1e-12);
        prev = y;
    }
    CHECK(curve(-1.0) == Catch::Approx(0.1));
    CHECK(curve(2.0) == Catch::Approx(0.8));

    MonotoneCubic single({0.5}, {0.7});
    CHECK(single(0.1) == 0.7);
    CHECK_THROWS_AS(MonotoneCubic({0.1, 0.1}, {0.0, 1.0}), domain_error);
    CHECK_THROWS_AS(MonotoneCubic({}, {}), domain_error);
}

TEST_CASE("scatter export emits points and a smoothed curve") {
    TempDir dir;
    auto scatter = dir.path / "scatter.csv";
    auto curve = dir.path / "curve.csv";

    export_scatter_csv(scatter, curve, {});
    CHECK(parse_csv(slurp(scatter)).size() == 1);  // header only
    CHECK(parse_csv(slurp(curve)).size() == 1);

    std::vector<ScatterPoint> points;
    for (int i = 0; i < 40; ++i) {
        double x = (i + 0.5) / 40.0;
        points.push_back({"ch-" + std::to_string(i), x, x * 0.8 + 0.05});
    }
    export_scatter_csv(scatter, curve, points);
    auto scatter_rows = parse_csv(slurp(scatter));
    REQUIRE(scatter_rows.size() == 41);
    CHECK(scatter_rows[0][0] == "challenge");
    auto curve_rows = parse_csv(slurp(curve));
    REQUIRE(curve_rows.size() == 102);
    double mid = std::stod(curve_rows[51][1]);  // p_o = 0.5
    CHECK(mid == Catch::Approx(0.45).margin(0.02));
}

TEST_CASE("binned means group scatter points by original-rate bins") {
    std::vector<ScatterPoint> points{{"a", 0.01, 0.2}, {"b", 0.09, 0.4}, {"c", 0.95, 0.9}};
    auto bins = binned_means(points, 0.1);
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].count == 2);
    CHECK(bins[0].mean_x == Catch::Approx(0.05));
    CHECK(bins[0].mean_y == Catch::Approx(0.3));
    CHECK(bins[1].count == 1);
    CHECK(bins[1].mean_y == Catch::Approx(0.9));
    CHECK_THROWS_AS(binned_means(points, 0.0), domain_error);
}

TEST_CASE("theory export reproduces the closed forms") {
    TempDir dir;
    auto path = dir.path / "theory.csv";
    export_theory_csv(path, 0.2, {1, 5, 10});
    auto rows = parse_csv(slurp(path));
    REQUIRE(rows.size() == 102);
    REQUIRE(rows[0].size() == 8);
    CHECK(rows[0][0] == "p_o");
    CHECK(rows[0][1] == "expected_variant_success");
    CHECK(rows[0][5] == "variator_k1");
    CHECK(rows[0][7] == "variator_k10");

    // Row at p_o = 0: expected variant success w/4, variator Pass@10 = 0.4013.
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::stod(rows[1][1]) == Catch::Approx(0.05));
    CHECK(std::stod(rows[1][7]) == Catch::Approx(0.4012630607616213).epsilon(1e-9));
    CHECK(std::stod(rows[1][2]) == 0.0);  // repeater at p_o = 0

    // Last row: p_o = 1 exactly once.
    CHECK(std::stod(rows[101][0]) == 1.0);
    CHECK(std::stod(rows[101][2]) == 1.0);
}
