#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace pathlife::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Every draw is addressed by (seed, stream, unit, step, slot), so batches are
// reproducible and order-independent: path p of a 10-path batch equals path p
// of a 1000-path batch, and two continuations that traverse the same grid step
// consume the same normal. That last property is what gives common random
// numbers across bumped/shifted re-simulations for free.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Well-known stream ids; keep distinct so market and chain draws never collide.
namespace streams {
inline constexpr std::uint32_t market = 1;
inline constexpr std::uint32_t chain = 2;
inline constexpr std::uint32_t inner = 3;
} // namespace streams

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    // Two independent uniforms in (0,1) from one block.
    std::pair<double, double> uniform_pair(std::uint32_t unit, std::uint32_t step,
                                           std::uint32_t slot = 0) const noexcept;

    double uniform(std::uint32_t unit, std::uint32_t step, std::uint32_t slot = 0) const noexcept {
        return uniform_pair(unit, step, slot).first;
    }

    // Standard normal via Box-Muller on one block.
    double normal(std::uint32_t unit, std::uint32_t step, std::uint32_t slot = 0) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
};

// SplitMix64-style mixing for deriving per-slot sub-seeds from a master seed.
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

} // namespace pathlife::rng
