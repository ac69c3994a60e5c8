#pragma once

#include <cstdint>
#include <vector>

#include "ganaug/eval/strategy.hpp"

namespace ganaug::eval {

struct ConfusionCounts {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

struct PrecisionRecallF1 {
    double precision = 0, recall = 0, f1 = 0;
};

// All three ratios resolve 0/0 to 0 (no positive predictions / no positives
// / degenerate harmonic mean).
PrecisionRecallF1 f1_score(const ConfusionCounts& counts);

// probs[i] is the positive-class probability; labels[i] is 1 for positive.
// Predictions use p >= threshold.
ConfusionCounts confusion_from(const std::vector<double>& probs, const std::vector<int>& labels,
                               double threshold);

struct MetricsRecord {
    Strategy strategy = Strategy::Org;
    std::size_t k = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    double precision = 0, recall = 0, f1 = 0;
    double threshold = 0.5;
};

} // namespace ganaug::eval
