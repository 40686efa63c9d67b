#pragma once

#include <cmath>
#include <cstdint>

namespace slicemkt::detail {

/// SplitMix64: small, fast, full-period 64-bit generator. One instance per
/// replication, counter-derived from the master seed, keeps replications
/// independent and bit-reproducible regardless of scheduling.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream) {
        // Decorrelate the stream index before mixing it into the seed.
        std::uint64_t z = (stream + 0x9e3779b97f4a7c15ULL) * 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 31;
        return Rng(master_seed ^ z);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate; rate must be > 0.
    double exponential(double rate) { return -std::log1p(-next_unit()) / rate; }
};

}  // namespace slicemkt::detail
