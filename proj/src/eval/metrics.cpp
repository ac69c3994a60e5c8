#include "ganaug/eval/metrics.hpp"

#include "ganaug/errors.hpp"

namespace ganaug::eval {

PrecisionRecallF1 f1_score(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0)
        throw InvalidInput("confusion counts must be non-negative");
    PrecisionRecallF1 m;
    m.precision = (c.tp + c.fp) == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp);
    m.recall = (c.tp + c.fn) == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

ConfusionCounts confusion_from(const std::vector<double>& probs, const std::vector<int>& labels,
                               double threshold) {
    if (probs.size() != labels.size())
        throw InvalidInput("probability and label vectors must align");
    ConfusionCounts c;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const bool pred = probs[i] >= threshold;
        const bool pos = labels[i] == 1;
        if (pred && pos) ++c.tp;
        else if (pred && !pos) ++c.fp;
        else if (!pred && pos) ++c.fn;
        else ++c.tn;
    }
    return c;
}

} // namespace ganaug::eval
