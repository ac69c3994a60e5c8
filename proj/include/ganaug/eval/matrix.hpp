#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ganaug/data/split.hpp"
#include "ganaug/data/training_set.hpp"
#include "ganaug/eval/classifier.hpp"
#include "ganaug/eval/metrics.hpp"
#include "ganaug/eval/strategy.hpp"
#include "ganaug/models/checkpoint.hpp"

namespace ganaug::eval {

struct ExperimentMatrixConfig {
    std::vector<std::size_t> k_values{100, 250, 500, 750, 1000, 1300};
    int imbalance_ratio = 10;
    double synthetic_multiplier = 1.5;
    std::vector<Strategy> strategies{Strategy::Org, Strategy::AugOrg, Strategy::Gan,
                                     Strategy::AugGan};
    int repetitions = 3;
    std::array<double, 3> split_fractions{0.60, 0.066, 0.334};
    ClassifierTrainConfig classifier;
    std::uint64_t master_seed = 0;
    int jobs = 1;

    void validate() const;
};

// Everything shared across cells: the two class splits and the fixed
// validation/test pools assembled from them.
struct PreparedMatrix {
    data::DatasetSplit positive_split;
    data::DatasetSplit negative_split;
    data::PatchPool validation;
    data::PatchPool test;
};

PreparedMatrix prepare_matrix(const ExperimentMatrixConfig& config,
                              const data::PatchPool& positives,
                              const data::PatchPool& negatives);

// Per-repetition resamples: the nested positive ladder, the shuffled negative
// order, the synthetic pool (sized for the largest k), and the cell seeds.
struct RepetitionPools {
    int repetition = 0;
    std::uint64_t rep_seed = 0;
    std::uint64_t classifier_seed = 0;
    data::SubsetLadder ladder;
    data::PatchPool negatives;
    data::PatchPool synthetic;
};

RepetitionPools prepare_repetition(const ExperimentMatrixConfig& config,
                                   const PreparedMatrix& prepared, int repetition,
                                   const models::Checkpoint* generator);

// Train and score one (strategy, k) cell of one repetition.
MetricsRecord evaluate_strategy(Strategy strategy, std::size_t k, const RepetitionPools& rep,
                                const PreparedMatrix& prepared,
                                const ExperimentMatrixConfig& config);

// The full grid: strategies x k_values x repetitions, sorted by
// (strategy, k, repetition). `generator` may be null when no strategy uses
// synthetic patches. Results are independent of the job count.
std::vector<MetricsRecord> run_matrix(const ExperimentMatrixConfig& config,
                                      const data::PatchPool& positives,
                                      const data::PatchPool& negatives,
                                      const models::Checkpoint* generator);

} // namespace ganaug::eval
