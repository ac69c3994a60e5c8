#include "ganaug/eval/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <cblas.h>

#include "ganaug/errors.hpp"
#include "ganaug/gan/synthesis.hpp"
#include "ganaug/models/networks.hpp"

namespace ganaug::eval {

void ExperimentMatrixConfig::validate() const {
    if (k_values.empty()) throw InvalidInput("k_values is empty");
    for (std::size_t i = 0; i + 1 < k_values.size(); ++i)
        if (k_values[i] >= k_values[i + 1])
            throw InvalidInput("k_values must be strictly ascending");
    if (k_values.front() == 0) throw InvalidInput("k_values must be positive");
    if (imbalance_ratio < 1) throw InvalidInput("imbalance_ratio must be >= 1");
    if (!(synthetic_multiplier > 0)) throw InvalidInput("synthetic_multiplier must be positive");
    if (strategies.empty()) throw InvalidInput("no strategies selected");
    for (std::size_t i = 0; i < strategies.size(); ++i)
        for (std::size_t j = i + 1; j < strategies.size(); ++j)
            if (strategies[i] == strategies[j]) throw InvalidInput("duplicate strategy");
    if (repetitions < 1) throw InvalidInput("repetitions must be >= 1");
    if (jobs < 1) throw InvalidInput("jobs must be >= 1");
    classifier.validate();
}

PreparedMatrix prepare_matrix(const ExperimentMatrixConfig& config,
                              const data::PatchPool& positives,
                              const data::PatchPool& negatives) {
    config.validate();
    if (positives.count(data::Label::Normal) != 0)
        throw InvalidInput("positive pool must contain only minority-class patches");
    if (negatives.count(data::Label::Mass) != 0)
        throw InvalidInput("negative pool must contain only majority-class patches");

    PreparedMatrix prep;
    prep.positive_split =
        data::split_dataset(positives, config.split_fractions, derive_seed(config.master_seed, 0xA11CE, 1));
    prep.negative_split =
        data::split_dataset(negatives, config.split_fractions, derive_seed(config.master_seed, 0xA11CE, 2));

    const std::size_t max_k = config.k_values.back();
    if (prep.positive_split.train.size() < max_k)
        throw InvalidInput("not enough training positives for the largest k");
    const std::size_t need_neg = max_k * static_cast<std::size_t>(config.imbalance_ratio);
    if (prep.negative_split.train.size() < need_neg)
        throw InvalidInput("not enough training negatives for ratio * largest k");

    for (const auto& p : prep.positive_split.validation.patches()) prep.validation.add(p);
    for (const auto& p : prep.negative_split.validation.patches()) prep.validation.add(p);
    for (const auto& p : prep.positive_split.test.patches()) prep.test.add(p);
    for (const auto& p : prep.negative_split.test.patches()) prep.test.add(p);
    if (prep.validation.empty()) throw InvalidInput("validation split came out empty");
    if (prep.test.count(data::Label::Mass) == 0)
        throw InvalidInput("test split has no positives to score");
    return prep;
}

RepetitionPools prepare_repetition(const ExperimentMatrixConfig& config,
                                   const PreparedMatrix& prepared, int repetition,
                                   const models::Checkpoint* generator) {
    RepetitionPools rep;
    rep.repetition = repetition;
    rep.rep_seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(repetition));
    rep.classifier_seed = derive_seed(rep.rep_seed, 4);
    rep.ladder = data::sample_nested_subsets(prepared.positive_split.train, config.k_values,
                                             derive_seed(rep.rep_seed, 1));
    const auto order =
        data::shuffled_indices(prepared.negative_split.train.size(), derive_seed(rep.rep_seed, 2));
    for (std::size_t idx : order) rep.negatives.add(prepared.negative_split.train[idx]);

    bool wants_synth = false;
    for (Strategy s : config.strategies) wants_synth = wants_synth || uses_synthetic(s);
    if (wants_synth) {
        if (!generator) throw InvalidInput("GAN strategies need a generator checkpoint");
        const std::size_t pool_size = static_cast<std::size_t>(
            std::ceil(config.synthetic_multiplier * double(config.k_values.back())));
        rep.synthetic = gan::synthesize(*generator, pool_size, derive_seed(rep.rep_seed, 3));
    }
    return rep;
}

MetricsRecord evaluate_strategy(Strategy strategy, std::size_t k, const RepetitionPools& rep,
                                const PreparedMatrix& prepared,
                                const ExperimentMatrixConfig& config) {
    data::TrainingSet ts = data::build_training_set(
        k, rep.ladder, prepared.positive_split.train, rep.negatives, rep.synthetic, strategy,
        config.imbalance_ratio, config.synthetic_multiplier);
    ClassifierTrainConfig cls = config.classifier;
    cls.seed = rep.classifier_seed;
    TrainedClassifier trained = train_classifier(ts, prepared.validation, cls);
    nn::Net<float> net = models::restore_net(trained.checkpoint);
    auto [probs, labels] = classifier_predict(net, prepared.test);
    const PrecisionRecallF1 m = f1_score(confusion_from(probs, labels, 0.5));
    MetricsRecord rec;
    rec.strategy = strategy;
    rec.k = k;
    rec.repetition = rep.repetition;
    rec.seed = rep.rep_seed;
    rec.precision = m.precision;
    rec.recall = m.recall;
    rec.f1 = m.f1;
    rec.threshold = 0.5;
    return rec;
}

std::vector<MetricsRecord> run_matrix(const ExperimentMatrixConfig& config,
                                      const data::PatchPool& positives,
                                      const data::PatchPool& negatives,
                                      const models::Checkpoint* generator) {
    PreparedMatrix prepared = prepare_matrix(config, positives, negatives);

    std::vector<RepetitionPools> reps;
    reps.reserve(config.repetitions);
    for (int r = 0; r < config.repetitions; ++r)
        reps.push_back(prepare_repetition(config, prepared, r, generator));

    struct Cell {
        Strategy strategy;
        std::size_t k;
        int rep;
    };
    std::vector<Cell> cells;
    for (Strategy s : config.strategies)
        for (std::size_t k : config.k_values)
            for (int r = 0; r < config.repetitions; ++r) cells.push_back({s, k, r});

    std::vector<MetricsRecord> results(cells.size());
    if (config.jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            results[i] = evaluate_strategy(cells[i].strategy, cells[i].k, reps[cells[i].rep],
                                           prepared, config);
    } else {
        openblas_set_num_threads(1);
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mu;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                try {
                    results[i] = evaluate_strategy(cells[i].strategy, cells[i].k,
                                                   reps[cells[i].rep], prepared, config);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(config.jobs, static_cast<int>(cells.size()));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    std::sort(results.begin(), results.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
        if (a.strategy != b.strategy) return static_cast<int>(a.strategy) < static_cast<int>(b.strategy);
        if (a.k != b.k) return a.k < b.k;
        return a.repetition < b.repetition;
    });
    return results;
}

} // namespace ganaug::eval
