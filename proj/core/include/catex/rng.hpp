#pragma once

#include <cmath>
#include <cstdint>

#include "catex/math.hpp"

namespace catex {

/// splitmix64 finalizer; also used as the per-step transition below.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-indexed random substream.
///
/// A (seed, stream) pair fully determines the sequence, so work can be
/// partitioned across threads by stream index: results never depend on
/// scheduling or worker count. 2^64 disjoint streams per seed.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(mix64(seed) ^ (0xd1b54a32d192ed03ULL * (stream + 1)))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0,1): 53-bit mantissa, offset half an ulp away from 0.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by inverse-CDF transform (one uniform per draw).
    double next_normal() { return detail::norm_quantile_fast(next_uniform()); }

    double next_exponential(double mean) { return -mean * std::log(next_uniform()); }

    double next_lognormal(double log_mean, double log_sigma) {
        return std::exp(log_mean + log_sigma * next_normal());
    }

private:
    std::uint64_t state_;
};

}  // namespace catex
