#pragma once

#include <cstdint>
#include <vector>

#include "ganaug/data/patch.hpp"

namespace ganaug::data {

// Axis-aligned rectangle in pixel coordinates, [x, x+w) x [y, y+h).
struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool intersects(const Box& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
};

// Full image with expert-style annotations: lesion boxes plus a tissue mask
// (true = tissue, false = empty background).
struct AnnotatedImage {
    Image pixels;                 // in [0,1]
    std::vector<Box> mass_boxes;
    std::vector<uint8_t> background_mask; // h*w, row-major; empty = all tissue

    bool tissue_at(int r, int c) const {
        return background_mask.empty() || background_mask[static_cast<std::size_t>(r) * pixels.w + c] != 0;
    }
};

// One Mass patch per annotation box (centered on the box center, clamped to
// image bounds) plus n_negative Normal patches placed uniformly at random so
// that each has zero overlap with every box and >= 95% of its pixels on
// tissue. Rejection sampling; throws InfeasibleSampling once
// patch_size^2 * 100 attempts are spent.
PatchPool extract_patches(const AnnotatedImage& image, int patch_size, int n_negative,
                          std::uint64_t seed);

} // namespace ganaug::data
