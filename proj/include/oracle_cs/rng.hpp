#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace oracle_cs {

/// Seeded, splittable random source.
///
/// A generator is identified by a (seed, stream) pair. Distinct streams under
/// the same seed are statistically independent; identical pairs replay the
/// same sequence. Uniform bits come from a 64-bit Mersenne Twister seeded by
/// a SplitMix64 hash of the pair. Normals use the Box-Muller transform and
/// uniform integers use rejection sampling, so no implementation-defined
/// std:: distribution enters the sample path.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// A generator on another stream under the same seed.
    Rng substream(std::uint64_t stream) const { return Rng(seed_, stream); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Standard normal.
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// SplitMix64 finalizer. Exposed for deriving child seeds from a master seed.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for a labelled sub-experiment (e.g. one series of a sweep).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t label);

}  // namespace oracle_cs
