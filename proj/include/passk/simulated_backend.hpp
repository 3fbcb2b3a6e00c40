// Seeded stand-in for a language model. Every task statement carries an
// embedded latent success rate; variants spread the parent's rate by a
// clipped uniform step, and solutions succeed with the task's rate. All
// randomness is a pure function of (seed, job key), so runs are reproducible
// at any concurrency and across retries.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "passk/backend.hpp"
#include "passk/errors.hpp"
#include "passk/rng.hpp"

namespace passk {

namespace detail {

inline std::string format_rate(double rate) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", rate);
    return buf;
}

inline std::optional<double> find_rate_marker(std::string_view text) {
    static constexpr std::string_view marker = "latent-rate: ";
    auto pos = text.find(marker);
    if (pos == std::string_view::npos) return std::nullopt;
    const char* begin = text.data() + pos + marker.size();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) return std::nullopt;
    return value;
}

}  // namespace detail

class SimulatedBackend final : public SolverBackend {
  public:
    // spread_w = 0 is the null world: variants inherit the parent rate
    // exactly (used for calibration runs).
    SimulatedBackend(double spread_w, std::uint64_t seed)
        : spread_w_(spread_w), seed_(seed) {
        if (!(spread_w >= 0.0 && spread_w < 0.5)) {
            throw domain_error("simulated backend spread must lie in [0, 1/2), got " +
                               std::to_string(spread_w));
        }
    }

    BackendCapabilities capabilities() const override { return {true, true}; }

    // Rate used for a challenge whose statement carries no rate marker:
    // either an explicit override or a uniform draw keyed by the id.
    void set_original_rate(const std::string& challenge_id, double rate) {
        overrides_[challenge_id] = rate;
    }

    void set_programs(std::string pass_program, std::string fail_program) {
        pass_program_ = std::move(pass_program);
        fail_program_ = std::move(fail_program);
    }

    double original_rate(const std::string& challenge_id) const {
        if (auto it = overrides_.find(challenge_id); it != overrides_.end()) {
            return it->second;
        }
        return rng::to_unit(rng::fold(rng::fold(seed_, "original-latent"), challenge_id));
    }

    std::string generate_variant(const std::string& prompt, const JobKey& key) override {
        double parent = detail::find_rate_marker(prompt).value_or(original_rate(key.challenge_id));
        std::uint64_t draw_key = key.fold_into(rng::fold(seed_, "variant-latent"));
        double u = rng::to_unit(rng::mix64(draw_key));
        double rate = std::clamp(parent + spread_w_ * (2.0 * u - 1.0), 0.0, 1.0);

        std::uint64_t name_key = key.fold_into(rng::fold(seed_, "variant-name"));
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "%06llx",
                      static_cast<unsigned long long>(rng::mix64(name_key) & 0xffffff));

        std::string title = "Synthetic Theme " + std::string(suffix);
        std::string statement = "A reworded rendition of challenge " + key.challenge_id +
                                " (slot " + std::to_string(key.candidate_index) +
                                ").\nlatent-rate: " + detail::format_rate(rate) + "\n";
        return "<title>" + title + "</title>\n<challenge>" + statement +
               "</challenge>\n<architecture>layout " + std::string(suffix) +
               "</architecture>\n";
    }

    std::string generate_solution(const std::string& prompt, const JobKey& key) override {
        double rate = detail::find_rate_marker(prompt).value_or(original_rate(key.challenge_id));
        std::uint64_t draw_key = key.fold_into(rng::fold(seed_, "solve"));
        double u = rng::to_unit(rng::mix64(draw_key));
        const std::string& program = u < rate ? pass_program_ : fail_program_;
        return "Reasoning elided.\n<solution>" + program + "</solution>\n";
    }

  private:
    double spread_w_;
    std::uint64_t seed_;
    std::map<std::string, double> overrides_;
    std::string pass_program_ = "cat";
    std::string fail_program_ = "echo WRONG";
};

}  // namespace passk
