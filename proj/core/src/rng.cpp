#include "forgery/rng.hpp"

#include <cmath>

#include "forgery/errors.hpp"

namespace forgery {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Stafford variant 13 constants).
constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t DeterministicRng::mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = finalize(a + kGamma);
    h = finalize(h ^ (b + kGamma));
    return h;
}

std::uint64_t DeterministicRng::mix(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) {
    return finalize(mix(a, b) ^ (c + kGamma));
}

std::uint64_t DeterministicRng::mix(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c, std::uint64_t d) {
    return finalize(mix(a, b, c) ^ (d + kGamma));
}

DeterministicRng::DeterministicRng(std::uint64_t master_seed,
                                   std::uint64_t stream_index)
    : state_(mix(master_seed, stream_index)) {}

std::uint64_t DeterministicRng::next_u64() {
    state_ += kGamma;
    return finalize(state_);
}

std::uint32_t DeterministicRng::uniform_u32(std::uint32_t bound) {
    if (bound == 0)
        throw ParameterError("uniform_u32: bound must be > 0");
    // Lemire's multiply-shift rejection; unbiased and platform-stable.
    std::uint64_t m =
        static_cast<std::uint64_t>(static_cast<std::uint32_t>(next_u64() >> 32)) *
        bound;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < bound) {
        const std::uint32_t t = (0u - bound) % bound;
        while (lo < t) {
            m = static_cast<std::uint64_t>(
                    static_cast<std::uint32_t>(next_u64() >> 32)) *
                bound;
            lo = static_cast<std::uint32_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 32);
}

std::uint64_t DeterministicRng::uniform_u64(std::uint64_t bound) {
    if (bound == 0)
        throw ParameterError("uniform_u64: bound must be > 0");
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        const std::uint64_t t = (0ULL - bound) % bound;
        while (lo < t) {
            m = static_cast<unsigned __int128>(next_u64()) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

int DeterministicRng::uniform_int(int lo, int hi) {
    if (lo > hi)
        throw ParameterError("uniform_int: empty range");
    const std::uint64_t span =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    return static_cast<int>(lo + static_cast<std::int64_t>(uniform_u64(span)));
}

double DeterministicRng::uniform_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DeterministicRng::uniform_real(double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ParameterError("uniform_real: invalid range");
    return lo + uniform_double() * (hi - lo);
}

bool DeterministicRng::bernoulli(double p) {
    return uniform_double() < p;
}

} // namespace forgery
