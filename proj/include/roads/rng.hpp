#pragma once

#include <cstdint>

namespace roads {

// xoshiro256++ with splitmix64 seeding. Replica streams are derived as
// splitmix64(master_seed, replica_index), so growing the replica count never
// perturbs earlier replicas. Poisson counts use inversion below mean 30 and
// Hormann's PTRS transformed rejection above it; the method is deterministic
// given the stream, with no normal approximation anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng for_replica(std::uint64_t master_seed, std::uint64_t replica);

    std::uint64_t next_u64();

    // Uniform in (0, 1); never returns an exact 0 or 1, so -log() is safe.
    double uniform01();

    // Uniform integer in [0, n), n >= 1.
    std::uint32_t uniform_below(std::uint32_t n);

    bool bit() { return (next_u64() >> 63) != 0; }

    double exponential();

    long poisson(double mean);

private:
    std::uint64_t s_[4];

    long poisson_inversion(double mean);
    long poisson_ptrs(double mean);
};

// SplitMix64 step; exposed for seed-derivation tests.
std::uint64_t splitmix64(std::uint64_t& state);

// Keyed hash combining a master seed and a replica index into a stream seed.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replica);

}  // namespace roads
