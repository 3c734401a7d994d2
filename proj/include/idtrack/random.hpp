#pragma once

// Portable pseudo-random streams. The engine is std::mt19937_64, whose
// output sequence is fixed by the standard. The standard distributions are
// implementation-defined, so uniform and normal variates are derived here:
// uniforms take the top 53 bits, normals use the Marsaglia polar method.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace idtrack {

struct RandomSeed {
    std::uint64_t value = 0;
};

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for an independent stream, keyed by a path of integers.
inline constexpr RandomSeed derive_seed(RandomSeed base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(base.value);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
    return {s};
}

class Rng {
public:
    explicit Rng(RandomSeed seed) : engine_(seed.value) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : static_cast<std::uint64_t>(uniform() * n) % n; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace idtrack
