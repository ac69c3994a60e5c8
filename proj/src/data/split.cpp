#include "ganaug/data/split.hpp"

#include <cmath>
#include <numeric>

#include "ganaug/errors.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::data {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);
    return idx;
}

DatasetSplit split_dataset(const PatchPool& pool, std::array<double, 3> fractions,
                           std::uint64_t seed) {
    const double sum = fractions[0] + fractions[1] + fractions[2];
    if (fractions[0] <= 0 || fractions[1] <= 0 || fractions[2] <= 0 || std::abs(sum - 1.0) > 1e-9)
        throw InvalidInput("split_dataset: fractions must be positive and sum to 1");

    const auto idx = shuffled_indices(pool.size(), seed);
    const std::size_t n = pool.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(fractions[0] * n));
    const std::size_t n_val = static_cast<std::size_t>(std::floor(fractions[1] * n));

    DatasetSplit split;
    split.fractions = fractions;
    split.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const Patch& p = pool[idx[i]];
        if (i < n_train)
            split.train.add(p);
        else if (i < n_train + n_val)
            split.validation.add(p);
        else
            split.test.add(p);
    }
    return split;
}

SubsetLadder sample_nested_subsets(const PatchPool& pool, const std::vector<std::size_t>& sizes,
                                   std::uint64_t seed) {
    if (sizes.empty()) throw InvalidInput("sample_nested_subsets: no sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw InvalidInput("sample_nested_subsets: sizes must be strictly ascending");
    if (sizes.back() > pool.size())
        throw InvalidInput("sample_nested_subsets: largest size exceeds pool size");

    const auto idx = shuffled_indices(pool.size(), seed);
    SubsetLadder ladder;
    ladder.sizes = sizes;
    for (std::size_t k : sizes) {
        std::vector<std::string> ids;
        ids.reserve(k);
        for (std::size_t i = 0; i < k; ++i) ids.push_back(pool[idx[i]].id);
        ladder.subsets.emplace(k, std::move(ids));
    }
    return ladder;
}

} // namespace ganaug::data
