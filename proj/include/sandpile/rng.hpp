#pragma once

#include <cstdint>
#include <vector>

namespace sandpile {

/// splitmix64: seedable 64-bit generator whose state transition uses only
/// integer arithmetic, so a seeded stream replays identically on every
/// platform. Simulation output records the generator by name.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr const char* name() { return "splitmix64"; }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform in [0,n), unbiased via rejection. n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

private:
    std::uint64_t state_;
};

/// Index drawn proportionally to `weights` (all strictly positive).
inline std::size_t pick_weighted(SplitMix64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double r = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace sandpile
