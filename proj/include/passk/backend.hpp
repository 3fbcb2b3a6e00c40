// Solver backend interface. A backend turns a rendered prompt into raw model
// output; every request carries a job key that identifies the (challenge,
// task, candidate) slot, which seeded backends use to make responses a pure
// function of the key.

#pragma once

#include <cstdint>
#include <string>

#include "passk/rng.hpp"

namespace passk {

struct JobKey {
    std::string challenge_id;
    std::string task;  // "original" or "variant-<index>" or "variant-gen"
    int candidate_index = 0;

    std::string to_string() const {
        return challenge_id + "/" + task + "/" + std::to_string(candidate_index);
    }

    std::uint64_t fold_into(std::uint64_t seed) const {
        std::uint64_t key = rng::fold(seed, challenge_id);
        key = rng::fold(key, task);
        key = rng::fold(key, static_cast<std::uint64_t>(candidate_index));
        return key;
    }
};

struct BackendCapabilities {
    bool generate_variant = false;
    bool generate_solution = false;
};

class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    virtual BackendCapabilities capabilities() const = 0;
    virtual std::string generate_variant(const std::string& prompt, const JobKey& key) = 0;
    virtual std::string generate_solution(const std::string& prompt, const JobKey& key) = 0;
};

}  // namespace passk
