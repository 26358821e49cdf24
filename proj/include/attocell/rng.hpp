#pragma once

#include <cmath>
#include <cstdint>

// Self-contained pseudo-random kit for the Monte Carlo engine. The generator
// and samplers are spelled out here (rather than delegating to <random>) so
// that streams are bit-identical across platforms, compilers, and standard
// library versions — reproducibility of simulation output is part of the
// engine's contract.

namespace attocell {

// SplitMix64: one-at-a-time 64-bit mixer. Used only for seeding.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ by Blackman & Vigna: small state, excellent statistical
// quality, trivially portable.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : s_) word = mix.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1): the top 53 bits scaled by 2^-53, so every value is an
    // exactly representable dyadic rational.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Exact Poisson sample via the product-of-uniforms method. Means above 500
    // are split additively (Poisson(m1+m2) = Poisson(m1) + Poisson(m2)) so the
    // running product never underflows. Cost is O(mean) draws, which is fine
    // for the cell counts this engine needs (tens to hundreds).
    long poisson(double mean) {
        long total = 0;
        while (mean > 500.0) {
            total += poisson_small(500.0);
            mean -= 500.0;
        }
        return total + poisson_small(mean);
    }

  private:
    long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double floor_p = std::exp(-mean);
        double p = 1.0;
        long k = 0;
        do {
            ++k;
            p *= uniform01();
        } while (p > floor_p);
        return k - 1;
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
};

// Deterministic, well-separated stream seed for one Monte Carlo trial. Seeding
// is a pure function of (base_seed, index), never of scheduling, which is what
// makes results independent of the worker count.
inline std::uint64_t trial_seed(std::uint64_t base_seed, long index) {
    return base_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
}

}  // namespace attocell
