#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ganaug/data/training_set.hpp"
#include "ganaug/models/checkpoint.hpp"

namespace ganaug::eval {

struct ClassifierTrainConfig {
    int epochs = 30;
    int batch_size = 64;
    double learning_rate = 2e-4;
    double adam_beta1 = 0.5;
    double adam_beta2 = 0.999;
    int patience = 8;      // epochs without val-F1 improvement; <=0 disables
    int base_channels = 0; // 0 = default for the image size
    int kernel_size = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainedClassifier {
    models::Checkpoint checkpoint; // the epoch with the best validation F1
    double best_val_f1 = 0;
    int best_epoch = 0; // 0 = the untrained initialization
    std::vector<double> val_f1_history;
};

// Positive class is Mass. Flips are applied on the fly at batch time iff the
// training set asks for them. Model selection tracks validation F1 at
// threshold 0.5, starting from the untrained baseline, so a zero learning
// rate hands back the initialization untouched.
TrainedClassifier train_classifier(const data::TrainingSet& training,
                                   const data::PatchPool& validation,
                                   const ClassifierTrainConfig& config);

// Eval-mode probabilities and 0/1 labels (1 = Mass) for a pool.
std::pair<std::vector<double>, std::vector<int>> classifier_predict(nn::Net<float>& net,
                                                                    const data::PatchPool& pool,
                                                                    int batch_size = 128);

} // namespace ganaug::eval
