#include "ganaug/data/training_set.hpp"

#include <cmath>
#include <unordered_map>

#include "ganaug/errors.hpp"

namespace ganaug::data {

TrainingSet build_training_set(std::size_t k, const SubsetLadder& ladder,
                               const PatchPool& positives, const PatchPool& negatives,
                               const PatchPool& synthetic, eval::Strategy strategy, int ratio,
                               double multiplier) {
    if (!ladder.contains(k)) throw InvalidInput("build_training_set: ladder has no subset of size k");
    if (ratio < 1) throw InvalidInput("build_training_set: ratio must be >= 1");

    const std::size_t n_neg = k * static_cast<std::size_t>(ratio);
    if (negatives.size() < n_neg)
        throw InvalidInput("build_training_set: negative pool smaller than ratio*k");

    std::size_t n_synth = 0;
    if (eval::uses_synthetic(strategy)) {
        if (multiplier <= 0) throw InvalidInput("build_training_set: multiplier must be positive");
        n_synth = static_cast<std::size_t>(std::llround(multiplier * static_cast<double>(k)));
        if (synthetic.size() < n_synth)
            throw InvalidInput("build_training_set: synthetic pool smaller than multiplier*k");
    }

    std::unordered_map<std::string, const Patch*> by_id;
    by_id.reserve(positives.size());
    for (const Patch& p : positives.patches()) by_id.emplace(p.id, &p);

    TrainingSet out;
    out.flip_augment = eval::uses_flipping(strategy);
    for (const std::string& id : ladder.subsets.at(k)) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw InvalidInput("build_training_set: ladder id not found in positive pool: " + id);
        out.pool.add(*it->second);
    }
    for (std::size_t i = 0; i < n_synth; ++i) out.pool.add(synthetic[i]);
    for (std::size_t i = 0; i < n_neg; ++i) out.pool.add(negatives[i]);
    return out;
}

} // namespace ganaug::data
