#pragma once

#include "ganaug/data/patch.hpp"
#include "ganaug/data/split.hpp"
#include "ganaug/eval/strategy.hpp"

namespace ganaug::data {

struct TrainingSet {
    PatchPool pool;
    bool flip_augment = false; // apply random flips on the fly at batch time
};

// Assemble the classifier training set for one (strategy, k) cell.
//   ORG / Aug ORG: k real positives + ratio*k negatives.
//   GAN / Aug GAN: k real + round(multiplier*k) synthetic positives
//                  + ratio*k negatives.
// Positives come from ladder.subsets[k]; negatives are the first ratio*k
// entries of `negatives`, which the caller provides already seed-shuffled so
// negative subsets nest across k exactly like positive ones. Synthetic
// positives are the first round(multiplier*k) entries of `synthetic`.
TrainingSet build_training_set(std::size_t k, const SubsetLadder& ladder,
                               const PatchPool& positives, const PatchPool& negatives,
                               const PatchPool& synthetic, eval::Strategy strategy, int ratio,
                               double multiplier);

} // namespace ganaug::data
