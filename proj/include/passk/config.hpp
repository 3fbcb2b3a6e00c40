// Experiment configuration: defaults for the candidate-budget protocol, a
// strict-parity check (original candidates == variants x candidates each), and
// a key=value config-file parser that rejects unknown keys.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "passk/errors.hpp"
#include "passk/http_backend.hpp"
#include "passk/judge.hpp"
#include "passk/stats.hpp"

namespace passk {

enum class BackendKind { simulated, http };

inline const char* to_string(BackendKind b) {
    return b == BackendKind::simulated ? "simulated" : "http";
}

struct ExperimentConfig {
    std::uint64_t seed = 0;
    unsigned workers = 8;
    int original_candidates = 150;
    int variant_count = 25;
    int candidates_per_variant = 6;
    int private_candidates_per_variant = 20;
    std::vector<int> k_values{1, 5, 10, 15, 20};
    long long replicates = 100000;
    bool strict_protocol = true;  // enforce original = variants x per-variant parity
    SandboxLimits limits;

    BackendKind backend = BackendKind::simulated;
    double spread_w = 0.2;  // simulated backend spread half-width; 0 = consistent world
    EndpointConfig endpoint;

    PassAtKEstimate::Method estimator = PassAtKEstimate::Method::plug_in;
    bool record_timing = false;  // journal wall_time stays 0 unless enabled

    void validate() const {
        if (workers < 1) throw config_error("workers must be >= 1");
        if (original_candidates < 1) throw config_error("original_candidates must be >= 1");
        if (variant_count < 1) throw config_error("variant_count must be >= 1");
        if (candidates_per_variant < 1) {
            throw config_error("candidates_per_variant must be >= 1");
        }
        if (private_candidates_per_variant < 1) {
            throw config_error("private_candidates_per_variant must be >= 1");
        }
        if (strict_protocol &&
            original_candidates != variant_count * candidates_per_variant) {
            throw config_error(
                "strict protocol requires original_candidates == variant_count * "
                "candidates_per_variant (got " +
                std::to_string(original_candidates) + " vs " +
                std::to_string(variant_count) + " * " +
                std::to_string(candidates_per_variant) + ")");
        }
        if (k_values.empty()) throw config_error("k_values must not be empty");
        for (int k : k_values) {
            if (k < 1) throw config_error("every k value must be >= 1");
        }
        if (replicates < 1000) throw config_error("replicates must be >= 1000");
        if (!(spread_w >= 0.0) || spread_w >= 0.5) {
            throw config_error("spread_w must lie in [0, 0.5)");
        }
        if (limits.time_per_case <= 0.0) throw config_error("time_per_case must be positive");
        if (limits.memory_bytes == 0) throw config_error("memory limit must be positive");
        if (limits.interpreter.empty()) throw config_error("interpreter must be non-empty");
    }
};

namespace detail {

inline std::string trim_ws(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long parsed = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw config_error("config key " + key + " expects an integer, got '" + value + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        std::uint64_t parsed = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw config_error("config key " + key + " expects an unsigned integer, got '" +
                           value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double parsed = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw config_error("config key " + key + " expects a number, got '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw config_error("config key " + key + " expects a boolean, got '" + value + "'");
}

inline std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream stream(value);
    std::string part;
    while (std::getline(stream, part, ',')) {
        part = trim_ws(part);
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

}  // namespace detail

// Applies one key=value pair onto the config. Unknown keys are an error so
// typos never silently fall back to defaults.
inline void apply_config_entry(ExperimentConfig& config, const std::string& key,
                               const std::string& value) {
    using namespace detail;
    if (key == "seed") {
        config.seed = parse_u64(key, value);
    } else if (key == "workers") {
        config.workers = static_cast<unsigned>(parse_int(key, value));
    } else if (key == "original_candidates") {
        config.original_candidates = static_cast<int>(parse_int(key, value));
    } else if (key == "variant_count") {
        config.variant_count = static_cast<int>(parse_int(key, value));
    } else if (key == "candidates_per_variant") {
        config.candidates_per_variant = static_cast<int>(parse_int(key, value));
    } else if (key == "private_candidates_per_variant") {
        config.private_candidates_per_variant = static_cast<int>(parse_int(key, value));
    } else if (key == "k_values") {
        config.k_values.clear();
        for (const auto& part : split_commas(value)) {
            config.k_values.push_back(static_cast<int>(parse_int(key, part)));
        }
    } else if (key == "replicates") {
        config.replicates = parse_int(key, value);
    } else if (key == "strict_protocol") {
        config.strict_protocol = parse_bool(key, value);
    } else if (key == "backend") {
        if (value == "simulated") {
            config.backend = BackendKind::simulated;
        } else if (value == "http") {
            config.backend = BackendKind::http;
        } else {
            throw config_error("config key backend expects simulated or http, got '" + value +
                               "'");
        }
    } else if (key == "spread_w") {
        config.spread_w = parse_double(key, value);
    } else if (key == "estimator") {
        if (value == "plug_in") {
            config.estimator = PassAtKEstimate::Method::plug_in;
        } else if (value == "combinatorial") {
            config.estimator = PassAtKEstimate::Method::combinatorial;
        } else {
            throw config_error("config key estimator expects plug_in or combinatorial, got '" +
                               value + "'");
        }
    } else if (key == "record_timing") {
        config.record_timing = parse_bool(key, value);
    } else if (key == "time_per_case") {
        config.limits.time_per_case = parse_double(key, value);
    } else if (key == "memory_mb") {
        config.limits.memory_bytes = static_cast<std::uint64_t>(parse_int(key, value)) << 20;
    } else if (key == "interpreter") {
        auto parts = split_commas(value);
        if (parts.empty()) throw config_error("config key interpreter must be non-empty");
        config.limits.interpreter = parts;
    } else if (key == "run_all_cases") {
        config.limits.run_all_cases = parse_bool(key, value);
    } else if (key == "base_url") {
        config.endpoint.base_url = value;
    } else if (key == "endpoint_path") {
        config.endpoint.path = value;
    } else if (key == "model") {
        config.endpoint.model = value;
    } else if (key == "credential_env_var") {
        config.endpoint.credential_env_var = value;
    } else if (key == "system_prompt") {
        config.endpoint.system_prompt = value;
    } else if (key == "temperature") {
        config.endpoint.temperature = parse_double(key, value);
    } else if (key == "max_tokens") {
        config.endpoint.max_tokens = parse_int(key, value);
    } else if (key == "max_thinking_tokens") {
        config.endpoint.max_thinking_tokens = parse_int(key, value);
    } else if (key == "max_attempts") {
        config.endpoint.max_attempts = static_cast<int>(parse_int(key, value));
    } else if (key == "initial_backoff_ms") {
        config.endpoint.initial_backoff_ms = static_cast<int>(parse_int(key, value));
    } else if (key == "request_timeout_seconds") {
        config.endpoint.timeout_seconds = static_cast<int>(parse_int(key, value));
    } else {
        throw config_error("unknown config key: " + key);
    }
}

// Parses a key=value config file. Blank lines and lines starting with '#' are
// ignored; values may contain '='; later entries override earlier ones.
inline ExperimentConfig load_config(const std::filesystem::path& path,
                                    ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string stripped = detail::trim_ws(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw config_error(path.string() + ":" + std::to_string(line_number) +
                               ": expected key=value");
        }
        std::string key = detail::trim_ws(stripped.substr(0, eq));
        std::string value = detail::trim_ws(stripped.substr(eq + 1));
        if (key.empty()) {
            throw config_error(path.string() + ":" + std::to_string(line_number) +
                               ": empty key");
        }
        try {
            apply_config_entry(base, key, value);
        } catch (const config_error& e) {
            throw config_error(path.string() + ":" + std::to_string(line_number) + ": " +
                               e.what());
        }
    }
    return base;
}

}  // namespace passk
