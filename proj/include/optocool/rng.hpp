#pragma once

// Reproducible random streams.
//
// Stream seeds are derived with SplitMix64 (Steele, Lea, Flood 2014) from
// (base seed, stream index). Each stream is a std::mt19937_64, whose output
// sequence is fixed by the C++ standard, and Gaussian variates come from the
// Marsaglia polar method on 53-bit uniforms, so a seed reproduces the same
// numbers on any conforming platform.

#include <cstdint>
#include <random>

namespace optocool {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `index` under `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept {
        // (0, 1): 53 random bits, offset by half an ulp so 0 never appears.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace optocool
