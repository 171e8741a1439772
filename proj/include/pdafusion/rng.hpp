#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace pdaf {

/// SplitMix64 finalizer. Used as the stable seed-derivation hash.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// run_seed = splitmix64(master_seed ^ splitmix64(run_index)).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
    return splitmix64(master_seed ^ splitmix64(run_index));
}

/// Seeded random source with platform-stable variates.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard leaves their algorithms unspecified, and
/// output files must be identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal (Marsaglia polar method).
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

}  // namespace pdaf
