#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace augdem {

// Deterministic splittable generator. Every randomized operation takes an
// explicit SplitRng (or a seed it wraps); there is no global RNG state.
//
// The stream is splitmix64. Child streams are derived by hashing the current
// state with a tag, so independent sub-experiments (per command, per
// repetition, per query) get decorrelated but fully reproducible streams
// from one master seed. Splitting does not advance the parent stream.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    SplitRng split(std::uint64_t tag) const {
        return SplitRng(mix(state_ ^ mix(tag + 0x632be59bd9b4e019ULL)));
    }

    SplitRng split(std::string_view label) const { return split(hash_label(label)); }

    // Uniform in [0, n). Rejection sampling keeps the draw unbiased and
    // platform-independent. n must be > 0.
    std::uint64_t uniform_u64(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller without a cached spare; two uniforms per draw.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    static std::uint64_t hash_label(std::string_view label) {
        // FNV-1a 64.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Shared rounding rule for sample sizes: round-half-up of fraction * count.
inline std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace augdem
