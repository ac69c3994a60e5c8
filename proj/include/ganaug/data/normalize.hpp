#pragma once

#include "ganaug/data/patch.hpp"

namespace ganaug::data {

// Clip intensities at the 1st/99th percentiles (linear-interpolation
// convention), then min-max map to [0,1]. A constant image maps to all zeros.
Image histogram_normalize(const Image& raw);

// Affine map from the data's actual [min,max] onto [lo,hi]. A constant input
// maps to the midpoint (lo+hi)/2.
Image normalize_to_range(const Image& values, float lo, float hi);
std::vector<float> normalize_to_range(const std::vector<float>& values, float lo, float hi);

} // namespace ganaug::data
