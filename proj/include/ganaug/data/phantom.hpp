#pragma once

#include <cstdint>

#include "ganaug/data/patch.hpp"

namespace ganaug::data {

// Desk-scale procedural stand-in for a clinical patch dataset. Backgrounds
// are correlated noise; positive patches carry one centered elliptical blob.
struct PhantomConfig {
    int image_size = 32;
    int n_positive = 0;
    int n_negative = 0;
    double lesion_radius_min = 4.0;   // pixels
    double lesion_radius_max = 9.0;   // pixels
    double lesion_contrast_min = 0.15; // additive intensity delta
    double lesion_contrast_max = 0.40;
    double background_correlation_length = 3.0; // pixels
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic in config.seed: each patch draws from its own derived stream,
// so pools are bit-identical across runs and independent of generation order.
PatchPool generate_phantom_dataset(const PhantomConfig& config);

} // namespace ganaug::data
