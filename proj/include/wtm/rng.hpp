#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace wtm {

/// SplitMix64: a 64-bit counter-based generator with a fixed output mix.
/// The full algorithm is the three constants below plus the golden-ratio
/// increment, so any language can reproduce the stream bit-exactly:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Every derived draw below consumes a fixed number of next() calls, so
/// streams stay aligned across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]: the top 53 bits plus one, scaled by 2^-53.
    /// One next() call.
    double next_unit() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller cosine branch, exactly two next()
    /// calls: sqrt(-2 ln u1) * cos(2 pi u2).
    double next_gaussian() noexcept {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [lo, hi], inclusive, by modulo reduction (the bias
    /// is irrelevant at the ranges used here and keeps the draw count fixed).
    /// One next() call.
    int next_int(int lo, int hi) noexcept {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % range);
    }

private:
    std::uint64_t state_;
};

}  // namespace wtm
