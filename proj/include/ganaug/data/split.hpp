#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ganaug/data/patch.hpp"

namespace ganaug::data {

struct DatasetSplit {
    PatchPool train;
    PatchPool validation;
    PatchPool test;
    std::array<double, 3> fractions{};
    std::uint64_t seed = 0;
};

// Seeded shuffle, then floor(f*N) patches to train and validation and the
// remainder to test.
DatasetSplit split_dataset(const PatchPool& pool, std::array<double, 3> fractions,
                           std::uint64_t seed);

// Nested training subsets: subsets[k_i] is a prefix of subsets[k_{i+1}].
struct SubsetLadder {
    std::vector<std::size_t> sizes;                          // ascending
    std::map<std::size_t, std::vector<std::string>> subsets; // size -> patch ids

    bool contains(std::size_t k) const { return subsets.count(k) != 0; }
};

// One global seeded shuffle of the pool; subsets[k] = first k ids, which
// guarantees nesting across every pair of sizes.
SubsetLadder sample_nested_subsets(const PatchPool& pool, const std::vector<std::size_t>& sizes,
                                   std::uint64_t seed);

// The shuffled id order underlying a ladder over all pool entries. Used for
// negative pools, which are nested across k the same way positives are.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

} // namespace ganaug::data
