#pragma once

#include "ganaug/data/patch.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::data {

Image hflip(const Image& img);
Image vflip(const Image& img);

// Random horizontal flip (p=0.5) and, independently, random vertical flip
// (p=0.5). Label/source/id are preserved. Meant for on-the-fly batch
// assembly; augmented patches are never written back into a pool.
Patch flip_augment(const Patch& patch, Rng& rng);

} // namespace ganaug::data
