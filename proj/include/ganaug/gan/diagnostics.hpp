#pragma once

#include <vector>

#include "ganaug/data/patch.hpp"

namespace ganaug::gan {

// Fraction of non-DC spectral energy sitting at the Nyquist checkerboard
// frequency. 0 for constant images, 1 for a pure +/- checkerboard; values
// near 1/(S^2-1) are typical of white noise. Runs in O(S^2) because both the
// Nyquist coefficient and the total spectrum reduce to pixel-domain sums.
double checkerboard_score(const data::Image& img);
double checkerboard_score(const data::Patch& patch);

struct MemorizationStats {
    double min_distance = 0;
    double mean_distance = 0;
    std::vector<double> nearest; // per synthetic patch, in pool order
};

// Distance from each synthetic patch to its nearest real patch (pixel L2).
// A minimum of exactly 0 means a real patch was reproduced verbatim.
MemorizationStats memorization_distance(const data::PatchPool& synthetic,
                                        const data::PatchPool& reals);

} // namespace ganaug::gan
