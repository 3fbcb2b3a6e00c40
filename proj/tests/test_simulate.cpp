// Monte-Carlo simulation checks: estimates agree with the closed forms
// within a few standard errors, determinism holds for a fixed seed, and the
// result is bit-identical regardless of worker count.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>

#include "passk/simulate.hpp"
#include "passk/spread_model.hpp"

using namespace passk;

namespace {
SimulationSpec spec_for(Agent agent, SpreadModel model, int k, long long trials,
                        std::uint64_t seed, int workers) {
    SimulationSpec s(model);
    s.agent = agent;
    s.k = k;
    s.trials = trials;
    s.seed = seed;
    s.workers = workers;
    return s;
}
}  // namespace

TEST_CASE("sampled variant success matches the closed-form expectation") {
    for (double p_o : {0.05, 0.1, 0.5, 0.9, 0.97}) {
        SpreadModel model(p_o, 0.2);
        auto est = monte_carlo_expected_variant_success(model, 200000, 91);
        double expect = model.expected_variant_success();
        CAPTURE(p_o, est.mean, expect, est.standard_error);
        CHECK(std::abs(est.mean - expect) < 4.0 * est.standard_error + 1e-9);
    }
}

TEST_CASE("repeater estimate matches u_k of the original rate") {
    SpreadModel model(0.1, 0.2);
    for (int k : {1, 5, 10}) {
        auto est = simulate_pass_at_k(spec_for(Agent::repeater, model, k, 100000, 4242, 1));
        double expect = model.pass_at_k_repeater(k);
        CAPTURE(k, est.mean, expect);
        CHECK(std::abs(est.mean - expect) < 4.0 * est.standard_error + 1e-9);
    }
}

TEST_CASE("variator estimate matches u_k of the expected variant rate") {
    // Each of the k candidates draws its own independent variant, so the
    // success events are independent with marginal probability p_v and the
    // trial success probability is exactly 1 - (1 - p_v)^k.
    // Pairs chosen so the true rate stays far enough from 1 for the
    // binomial standard error to be informative at this trial count.
    const std::pair<double, int> cases[] = {{0.1, 1},  {0.1, 5}, {0.1, 10},
                                            {0.5, 1},  {0.5, 5}, {0.95, 1},
                                            {0.02, 20}};
    for (auto [p_o, k] : cases) {
        SpreadModel model(p_o, 0.2);
        auto est = simulate_pass_at_k(spec_for(Agent::variator, model, k, 100000, 7 + k, 1));
        double expect = model.pass_at_k_variator(k);
        CAPTURE(p_o, k, est.mean, expect);
        CHECK(std::abs(est.mean - expect) < 4.0 * est.standard_error + 1e-9);
    }
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    SpreadModel model(0.3, 0.15);
    auto a = simulate_pass_at_k(spec_for(Agent::variator, model, 5, 20000, 99, 1));
    auto b = simulate_pass_at_k(spec_for(Agent::variator, model, 5, 20000, 99, 1));
    CHECK(a.mean == b.mean);
    auto c = simulate_pass_at_k(spec_for(Agent::variator, model, 5, 20000, 100, 1));
    CHECK(a.mean != c.mean);
}

TEST_CASE("worker count does not change the result") {
    SpreadModel model(0.25, 0.2);
    auto one = simulate_pass_at_k(spec_for(Agent::repeater, model, 5, 50001, 31, 1));
    for (int workers : {2, 3, 8}) {
        auto multi = simulate_pass_at_k(spec_for(Agent::repeater, model, 5, 50001, 31, workers));
        CHECK(multi.mean == one.mean);
        CHECK(multi.standard_error == one.standard_error);
    }
    auto vone = simulate_pass_at_k(spec_for(Agent::variator, model, 7, 50001, 32, 1));
    for (int workers : {2, 5}) {
        auto multi = simulate_pass_at_k(spec_for(Agent::variator, model, 7, 50001, 32, workers));
        CHECK(multi.mean == vone.mean);
    }
}

TEST_CASE("simulation rejects invalid parameters") {
    SpreadModel model(0.5, 0.2);
    CHECK_THROWS_AS(simulate_pass_at_k(spec_for(Agent::repeater, model, 0, 1000, 1, 1)),
                    domain_error);
    CHECK_THROWS_AS(simulate_pass_at_k(spec_for(Agent::repeater, model, 5, 0, 1, 1)),
                    domain_error);
    CHECK_THROWS_AS(simulate_pass_at_k(spec_for(Agent::repeater, model, 5, 1000, 1, 0)),
                    domain_error);
}

TEST_CASE("agent names round-trip") {
    CHECK(to_string(Agent::repeater) == "repeater");
    CHECK(to_string(Agent::variator) == "variator");
}
