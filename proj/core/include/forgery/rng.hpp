#pragma once

#include <cstdint>

namespace forgery {

/// Counter-based deterministic generator (splitmix64 with a fixed gamma).
///
/// Identical (master_seed, stream_index) pairs produce identical draw
/// sequences on every platform and under any degree of parallelism: all
/// batch code derives one private stream per work item, so scheduling can
/// never reorder draws. Distribution mapping (bounded ints, doubles) is
/// implemented here rather than with std::uniform_*_distribution, whose
/// output is not specified portably.
class DeterministicRng {
public:
    DeterministicRng(std::uint64_t master_seed, std::uint64_t stream_index);

    /// 64-bit mix used everywhere a stream is derived from indices.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                             std::uint64_t d);

    std::uint64_t next_u64();

    /// Unbiased integer in [0, bound). bound must be > 0.
    std::uint32_t uniform_u32(std::uint32_t bound);
    std::uint64_t uniform_u64(std::uint64_t bound);

    /// Inclusive integer range.
    int uniform_int(int lo, int hi);

    /// [0, 1) with 53 random bits.
    double uniform_double();
    /// [lo, hi).
    double uniform_real(double lo, double hi);

    bool bernoulli(double p);

private:
    std::uint64_t state_;
};

} // namespace forgery
