#ifndef RSP_RNG_HPP
#define RSP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace rsp {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based pseudo-random stream (SplitMix64).
///
/// Every consumer owns its own stream, seeded through derive_substream, so
/// trials can run on any number of workers without reordering draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Exp(1) by inverse transform, -ln(1-u).
    double exponential() { return -std::log1p(-uniform()); }

    /// Exp(rate).
    double exponential(double rate) { return exponential() / rate; }

    /// Uniform integer in [0, bound). bound > 0. Multiply-shift; the
    /// O(bound/2^64) bias is irrelevant at the bounds used here.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

/// Deterministic substream id from a master seed, a purpose tag, and any
/// number of integer coordinates (parameter values, trial index, ...).
/// Reproducibility contract: same inputs, same id, on every platform.
inline std::uint64_t derive_substream(std::uint64_t master, std::string_view tag,
                                      std::initializer_list<std::uint64_t> parts = {}) {
    std::uint64_t h = mix64(master ^ 0xA0761D6478BD642Full);
    for (char c : tag)
        h = mix64(h ^ (static_cast<std::uint64_t>(static_cast<unsigned char>(c)) + 0x1D8E4E27C47D124Full));
    for (std::uint64_t p : parts)
        h = mix64(h ^ (p + 0x8EBC6AF09C88C6E3ull));
    return h;
}

} // namespace rsp

#endif
