#pragma once

#include <vector>

#include "wtm/core.hpp"
#include "wtm/rng.hpp"

namespace wtm::testing {

/// Seeded image of integer intensities in [0, 255] — integer-valued so the
/// degenerate-window floor behaves identically in every matcher path.
inline GrayImage random_image(int width, int height, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> pixels(static_cast<std::size_t>(width) * height);
    for (double& v : pixels) v = static_cast<double>(rng.next_int(0, 255));
    return {width, height, std::move(pixels)};
}

inline Patch random_patch(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Patch p;
    p.values.resize(n);
    for (double& v : p.values) v = static_cast<double>(rng.next_int(0, 255));
    return p;
}

}  // namespace wtm::testing
