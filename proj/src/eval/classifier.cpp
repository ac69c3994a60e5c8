#include "ganaug/eval/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ganaug/data/flip.hpp"
#include "ganaug/errors.hpp"
#include "ganaug/eval/metrics.hpp"
#include "ganaug/gan/losses.hpp"
#include "ganaug/models/networks.hpp"
#include "ganaug/nn/adam.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::eval {

void ClassifierTrainConfig::validate() const {
    if (epochs < 1) throw InvalidInput("epochs must be positive");
    if (batch_size < 1) throw InvalidInput("batch_size must be positive");
    if (!(learning_rate >= 0)) throw InvalidInput("learning_rate must be non-negative");
    if (kernel_size < 2) throw InvalidInput("kernel_size must be >= 2");
}

std::pair<std::vector<double>, std::vector<int>> classifier_predict(nn::Net<float>& net,
                                                                    const data::PatchPool& pool,
                                                                    int batch_size) {
    if (pool.empty()) throw InvalidInput("cannot predict on an empty pool");
    const bool was_training = net.training();
    net.set_training(false);
    const int s = pool[0].side();
    const std::size_t n = pool.size();
    std::vector<double> probs;
    std::vector<int> labels;
    probs.reserve(n);
    labels.reserve(n);
    for (std::size_t lo = 0; lo < n; lo += static_cast<std::size_t>(batch_size)) {
        const std::size_t hi = std::min(n, lo + static_cast<std::size_t>(batch_size));
        const std::size_t b = hi - lo;
        nn::Tensor<float> batch({b, 1, static_cast<std::size_t>(s), static_cast<std::size_t>(s)});
        for (std::size_t i = 0; i < b; ++i) {
            const data::Patch& p = pool[lo + i];
            if (p.side() != s) throw InvalidInput("pool mixes patch sizes");
            std::copy(p.pixels.pix.begin(), p.pixels.pix.end(),
                      batch.ptr() + i * static_cast<std::size_t>(s) * s);
        }
        nn::Tensor<float> logits = net.forward(batch);
        for (std::size_t i = 0; i < b; ++i) {
            probs.push_back(models::sigmoid_open01(double(logits.data[i])));
            labels.push_back(pool[lo + i].label == data::Label::Mass ? 1 : 0);
        }
    }
    net.set_training(was_training);
    return {std::move(probs), std::move(labels)};
}

namespace {

double validation_f1(nn::Net<float>& net, const data::PatchPool& validation) {
    auto [probs, labels] = classifier_predict(net, validation);
    return f1_score(confusion_from(probs, labels, 0.5)).f1;
}

} // namespace

TrainedClassifier train_classifier(const data::TrainingSet& training,
                                   const data::PatchPool& validation,
                                   const ClassifierTrainConfig& config) {
    config.validate();
    const data::PatchPool& pool = training.pool;
    if (pool.count(data::Label::Mass) == 0 || pool.count(data::Label::Normal) == 0)
        throw InvalidInput("classifier training needs both classes");
    if (validation.empty()) throw InvalidInput("validation pool is empty");
    const int s = pool[0].side();
    for (const auto& p : pool.patches())
        if (p.side() != s || p.pixels.h != p.pixels.w)
            throw InvalidInput("training patches must share one square side");

    models::ClassifierSpec spec{s, config.base_channels, config.kernel_size};
    nn::Net<float> net = models::build_classifier(spec, derive_seed(config.seed, 1));
    nn::Adam<float> opt(config.learning_rate, config.adam_beta1, config.adam_beta2);

    TrainedClassifier out;
    out.best_val_f1 = validation_f1(net, validation);
    out.best_epoch = 0;
    auto best_state = net.snapshot();

    const std::size_t n = pool.size();
    const std::size_t bsz = static_cast<std::size_t>(config.batch_size);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    int since_best = 0;
    for (int e = 1; e <= config.epochs; ++e) {
        Rng shuffle_rng(derive_seed(config.seed, 2, static_cast<std::uint64_t>(e)));
        shuffle_rng.shuffle(order);
        Rng flip_rng(derive_seed(config.seed, 3, static_cast<std::uint64_t>(e)));
        net.set_training(true);
        for (std::size_t lo = 0; lo < n; lo += bsz) {
            const std::size_t hi = std::min(n, lo + bsz);
            const std::size_t b = hi - lo;
            nn::Tensor<float> batch(
                {b, 1, static_cast<std::size_t>(s), static_cast<std::size_t>(s)});
            std::vector<double> targets(b);
            for (std::size_t i = 0; i < b; ++i) {
                const data::Patch& src = pool[order[lo + i]];
                targets[i] = src.label == data::Label::Mass ? 1.0 : 0.0;
                if (training.flip_augment) {
                    data::Patch flipped = data::flip_augment(src, flip_rng);
                    std::copy(flipped.pixels.pix.begin(), flipped.pixels.pix.end(),
                              batch.ptr() + i * static_cast<std::size_t>(s) * s);
                } else {
                    std::copy(src.pixels.pix.begin(), src.pixels.pix.end(),
                              batch.ptr() + i * static_cast<std::size_t>(s) * s);
                }
            }
            net.zero_grad();
            nn::Tensor<float> logits = net.forward(batch);
            double loss = 0;
            nn::Tensor<float> grad(logits.shape);
            for (std::size_t i = 0; i < b; ++i) {
                loss += gan::bce_with_logits(double(logits.data[i]), targets[i]);
                const double sg = 1.0 / (1.0 + std::exp(-double(logits.data[i])));
                grad.data[i] = static_cast<float>((sg - targets[i]) / double(b));
            }
            if (!std::isfinite(loss)) {
                char msg[96];
                std::snprintf(msg, sizeof(msg), "non-finite classifier loss at epoch %d", e);
                throw NonFiniteLoss(msg);
            }
            net.backward(grad, true, false);
            auto params = net.params();
            opt.step(params);
        }
        const double f1 = validation_f1(net, validation);
        out.val_f1_history.push_back(f1);
        // Replace the incumbent only when the weights actually moved; a
        // buffer-only score wobble (e.g. at learning rate 0) carries no new
        // model and must hand back the incumbent, initialization included.
        bool params_moved = false;
        for (auto& pr : net.params())
            if (!(*pr.value == best_state.at(pr.name))) {
                params_moved = true;
                break;
            }
        if (f1 > out.best_val_f1 && params_moved) {
            out.best_val_f1 = f1;
            out.best_epoch = e;
            best_state = net.snapshot();
            since_best = 0;
        } else if (++since_best >= config.patience && config.patience > 0) {
            break;
        }
    }

    net.restore(best_state);
    models::TrainingMeta meta;
    meta.epoch = out.best_epoch;
    meta.seed = config.seed;
    char num[64];
    std::snprintf(num, sizeof(num), "%.6f", out.best_val_f1);
    meta.extra["val_f1"] = num;
    out.checkpoint = models::make_checkpoint(net, spec, models::ModelKind::Classifier, meta);
    return out;
}

} // namespace ganaug::eval
