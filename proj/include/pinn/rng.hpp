#pragma once

#include <cstdint>
#include <cmath>

namespace pinn {

/// SplitMix64 counter-based generator. Used for all parameter initialization
/// so that draws are reproducible across platforms and substreams can be
/// derived without consuming the parent stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]: never returns 0, safe inside log().
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one draw per uniform pair).
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

/// Derive an independent substream seed, e.g. per layer or per network,
/// without perturbing the parent stream.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xd6e8feb86659fd93ULL * (index + 1)));
    return mix.next_u64();
}

}  // namespace pinn
