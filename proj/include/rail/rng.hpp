#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rail {

/// splitmix64 finalizer; used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seeded generator with platform-independent uniform and normal draws.
/// std::*_distribution are implementation-defined, so they are avoided to keep
/// seeded runs bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Seed of the child stream `name`; does not advance this stream.
    std::uint64_t derive_seed(std::string_view name) const { return mix64(seed_ ^ hash_name(name)); }

    /// Independent child stream keyed by name; does not advance this stream.
    Rng fork(std::string_view name) const { return Rng(derive_seed(name)); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller; one pair of uniforms per draw (no cached spare).
    double normal(double mean, double stddev);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace rail
