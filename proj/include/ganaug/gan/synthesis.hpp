#pragma once

#include <cstdint>

#include "ganaug/data/patch.hpp"
#include "ganaug/models/checkpoint.hpp"

namespace ganaug::gan {

// Draws n synthetic minority-class patches from a trained generator
// checkpoint. Pixels land in [0,1]; ids are synth_000000, synth_000001, ...
// Deterministic for a fixed (checkpoint, n, seed).
data::PatchPool synthesize(const models::Checkpoint& generator, std::size_t n,
                           std::uint64_t seed);

} // namespace ganaug::gan
