// Counter-based random number generation.
//
// Every stream is identified by a 64-bit key; the i-th draw of a stream is
// mix64(key + (i+1)*GAMMA), the SplitMix64 output function over a pure
// counter. Sub-streams are derived with fold(), so a draw is a pure function
// of (seed, derivation path, draw index) and is independent of evaluation
// order. This is what makes simulations reproducible at any worker count:
// workers may consume their streams in any order without affecting anyone
// else's values.
//
// Derivation rule used throughout the toolkit:
//   trial streams:      Stream(seed).fold(trial_index)
//   job seeds:          fold over (experiment seed, challenge id, task, candidate)
//   replicate streams:  Stream(seed).fold(replicate_index)

#pragma once

#include <cstdint>
#include <string_view>

namespace passk::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford mix 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t fold(std::uint64_t key, std::uint64_t id) {
    return mix64(key ^ mix64(id + kGamma));
}

// FNV-1a, for folding string identifiers (challenge ids, task kinds).
constexpr std::uint64_t hash_str(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t fold(std::uint64_t key, std::string_view id) {
    return fold(key, hash_str(id));
}

// Map a 64-bit word to a double in [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

class Stream {
public:
    explicit Stream(std::uint64_t key) : key_(key) {}

    Stream fold(std::uint64_t id) const { return Stream(rng::fold(key_, id)); }
    Stream fold(std::string_view id) const { return Stream(rng::fold(key_, id)); }

    std::uint64_t key() const { return key_; }

    // i-th draw of this stream, independent of any next_* calls.
    std::uint64_t u64_at(std::uint64_t i) const { return mix64(key_ + (i + 1) * kGamma); }
    double unit_at(std::uint64_t i) const { return to_unit(u64_at(i)); }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }
    double next_unit() { return to_unit(next_u64()); }
    bool next_bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace passk::rng
