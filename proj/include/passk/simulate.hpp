// Seeded Monte-Carlo simulation of the spread model and of both agents.
// This is the brute-force counterpart of the closed forms in
// spread_model.hpp; the two are checked against each other in the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "passk/errors.hpp"
#include "passk/rng.hpp"
#include "passk/spread_model.hpp"

namespace passk {

enum class Agent { repeater, variator };

inline const char* to_string(Agent a) {
    return a == Agent::repeater ? "repeater" : "variator";
}

struct SimulationSpec {
    Agent agent = Agent::repeater;
    SpreadModel model;
    int k = 1;
    long long trials = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    explicit SimulationSpec(SpreadModel m) : model(m) {}
};

struct SimulationEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long long trials = 0;
};

// One variant success rate: clip(p_o + U[-w, w], 0, 1). Consumes exactly one
// uniform draw from the stream.
inline double sample_variant_success(const SpreadModel& m, rng::Stream& stream) {
    double u = stream.next_unit();
    return std::clamp(m.p_o + m.w * (2.0 * u - 1.0), 0.0, 1.0);
}

namespace detail {

inline bool trial_succeeds(const SpreadModel& m, int k, Agent agent, rng::Stream trial_stream) {
    if (agent == Agent::repeater) {
        for (int j = 0; j < k; ++j) {
            if (trial_stream.next_bernoulli(m.p_o)) return true;
        }
        return false;
    }
    for (int j = 0; j < k; ++j) {
        // candidate j consumes draws 2j (variant rate) and 2j+1 (solve attempt)
        double rate = std::clamp(m.p_o + m.w * (2.0 * trial_stream.unit_at(2 * j) - 1.0), 0.0, 1.0);
        if (trial_stream.unit_at(2 * j + 1) < rate) return true;
    }
    return false;
}

}  // namespace detail

// Fraction of trials in which at least one of k candidates succeeds, with its
// binomial standard error. Trial t uses stream Stream(seed).fold(t), so the
// estimate is bit-identical for any worker count.
inline SimulationEstimate simulate_pass_at_k(const SimulationSpec& spec) {
    check_k(spec.k);
    if (spec.trials < 1) throw domain_error("trials must be >= 1");
    if (spec.workers < 1) throw domain_error("workers must be >= 1");

    const rng::Stream root(spec.seed);
    const unsigned workers = spec.workers;
    const Agent agent = spec.agent;

    auto count_range = [&](long long lo, long long hi) {
        long long successes = 0;
        for (long long t = lo; t < hi; ++t) {
            if (detail::trial_succeeds(spec.model, spec.k, agent,
                                       root.fold(static_cast<std::uint64_t>(t)))) {
                ++successes;
            }
        }
        return successes;
    };

    long long successes = 0;
    if (workers == 1) {
        successes = count_range(0, spec.trials);
    } else {
        std::vector<long long> partial(workers, 0);
        std::vector<std::thread> pool;
        const long long chunk = (spec.trials + workers - 1) / workers;
        for (unsigned i = 0; i < workers; ++i) {
            long long lo = std::min<long long>(spec.trials, static_cast<long long>(i) * chunk);
            long long hi = std::min<long long>(spec.trials, lo + chunk);
            pool.emplace_back([&, i, lo, hi] { partial[i] = count_range(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (long long p : partial) successes += p;  // fixed order, exact
    }

    double mean = static_cast<double>(successes) / static_cast<double>(spec.trials);
    double se = std::sqrt(mean * (1.0 - mean) / static_cast<double>(spec.trials));
    return {mean, se, spec.trials};
}

// Sample mean of the variant success rate over `samples` draws, with the
// sample standard error of the mean.
inline SimulationEstimate monte_carlo_expected_variant_success(const SpreadModel& m,
                                                               long long samples,
                                                               std::uint64_t seed) {
    if (samples < 1) throw domain_error("samples must be >= 1");
    rng::Stream stream(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long long i = 0; i < samples; ++i) {
        double v = sample_variant_success(m, stream);
        sum += v;
        sum_sq += v * v;
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    double var = std::max(0.0, sum_sq / n - mean * mean);
    double se = std::sqrt(var / n);
    return {mean, se, samples};
}

}  // namespace passk
