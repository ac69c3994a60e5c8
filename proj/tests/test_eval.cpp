#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ganaug/data/phantom.hpp"
#include "ganaug/data/split.hpp"
#include "ganaug/data/training_set.hpp"
#include "ganaug/errors.hpp"
#include "ganaug/eval/classifier.hpp"
#include "ganaug/eval/matrix.hpp"
#include "ganaug/eval/metrics.hpp"
#include "ganaug/eval/report.hpp"
#include "ganaug/models/checkpoint.hpp"
#include "ganaug/models/networks.hpp"
#include "ganaug/rng.hpp"
#include "helpers.hpp"

using namespace ganaug;
using testutil::TempDir;

namespace {

// Pool whose classes are separable by brightness: masses bright, normals dark.
data::PatchPool separable_pool(std::size_t n_mass, std::size_t n_normal, int side,
                               std::uint64_t seed) {
    Rng rng(seed);
    data::PatchPool pool;
    for (std::size_t i = 0; i < n_mass; ++i) {
        data::Patch p;
        p.id = "m" + std::to_string(i);
        p.label = data::Label::Mass;
        p.pixels = testutil::random_image(side, side, rng, 0.6f, 0.9f);
        pool.add(std::move(p));
    }
    for (std::size_t i = 0; i < n_normal; ++i) {
        data::Patch p;
        p.id = "n" + std::to_string(i);
        p.label = data::Label::Normal;
        p.pixels = testutil::random_image(side, side, rng, 0.1f, 0.4f);
        pool.add(std::move(p));
    }
    return pool;
}

data::PatchPool filter_label(const data::PatchPool& pool, data::Label want) {
    data::PatchPool out;
    for (const auto& p : pool.patches())
        if (p.label == want) out.add(p);
    return out;
}

models::Checkpoint untrained_generator(int image_size, std::uint64_t seed) {
    models::GeneratorSpec spec;
    spec.image_size = image_size;
    spec.base_channels = 16;
    spec.latent_dim = 8;
    auto g = models::build_generator(spec, seed);
    models::TrainingMeta meta;
    meta.seed = seed;
    meta.extra["latent_minmax"] = "1";
    return models::make_checkpoint(g, spec, meta);
}

eval::ExperimentMatrixConfig small_matrix_config(std::uint64_t master) {
    eval::ExperimentMatrixConfig cfg;
    cfg.k_values = {5, 10};
    cfg.imbalance_ratio = 3;
    cfg.synthetic_multiplier = 1.5;
    cfg.repetitions = 2;
    cfg.master_seed = master;
    cfg.classifier.epochs = 2;
    cfg.classifier.base_channels = 8;
    cfg.classifier.batch_size = 16;
    return cfg;
}

} // namespace

TEST_CASE("f1 closed forms") {
    {
        auto m = eval::f1_score({10, 0, 0, 0});
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
    }
    {
        // tp=50, fp=50 -> precision 0.5, recall 1, f1 = 2/3
        auto m = eval::f1_score({50, 50, 0, 0});
        CHECK(m.precision == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(m.recall == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    {
        // no positive predictions, 5 missed positives -> all zeros
        auto m = eval::f1_score({0, 0, 7, 5});
        CHECK(m.precision == 0.0);
        CHECK(m.recall == 0.0);
        CHECK(m.f1 == 0.0);
    }
    {
        // empty confusion: still all zeros, no division blowup
        auto m = eval::f1_score({0, 0, 0, 0});
        CHECK(m.f1 == 0.0);
    }
}

TEST_CASE("f1 agrees with a direct counting oracle on random data") {
    Rng rng(909);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng.uniform_int(64);
        std::vector<double> probs(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            probs[i] = rng.uniform01();
            labels[i] = rng.bernoulli(0.3) ? 1 : 0;
        }
        const double thr = rng.uniform(0.1, 0.9);

        long tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool pred = probs[i] >= thr;
            if (pred && labels[i]) tp++;
            else if (pred && !labels[i]) fp++;
            else if (!pred && !labels[i]) tn++;
            else fn++;
        }
        auto counts = eval::confusion_from(probs, labels, thr);
        CHECK(counts.tp == tp);
        CHECK(counts.fp == fp);
        CHECK(counts.tn == tn);
        CHECK(counts.fn == fn);

        auto m = eval::f1_score(counts);
        const double prec = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
        const double rec = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
        const double f1 = (prec + rec > 0) ? 2 * prec * rec / (prec + rec) : 0.0;
        CHECK(m.precision == doctest::Approx(prec).epsilon(1e-12));
        CHECK(m.recall == doctest::Approx(rec).epsilon(1e-12));
        CHECK(m.f1 == doctest::Approx(f1).epsilon(1e-12));
    }
}

TEST_CASE("prediction threshold is a half-open boundary") {
    std::vector<double> probs{0.5, 0.49999, 0.50001};
    std::vector<int> labels{1, 1, 0};
    auto counts = eval::confusion_from(probs, labels, 0.5);
    CHECK(counts.tp == 1);  // exactly at threshold counts as positive
    CHECK(counts.fn == 1);
    CHECK(counts.fp == 1);
    CHECK_THROWS_AS(eval::confusion_from({0.5}, {1, 0}, 0.5), InvalidInput);
}

TEST_CASE("zero learning rate returns the exact initialization") {
    auto pool = separable_pool(12, 24, 16, 3);
    data::TrainingSet ts;
    ts.pool = pool;
    auto val = separable_pool(4, 8, 16, 4);

    eval::ClassifierTrainConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 0;
    cfg.base_channels = 8;
    cfg.batch_size = 8;
    cfg.seed = 71;
    auto trained = eval::train_classifier(ts, val, cfg);

    REQUIRE(trained.val_f1_history.size() == 3);
    CHECK(trained.best_epoch == 0);

    // With a zero rate no weights can move, so the returned checkpoint is the
    // untouched initialization — buffers included.
    models::ClassifierSpec spec;
    spec.image_size = 16;
    spec.base_channels = 8;
    auto fresh = models::build_classifier(spec, derive_seed(cfg.seed, 1));
    auto restored = models::restore_net(trained.checkpoint);
    auto a = fresh.snapshot();
    auto b = restored.snapshot();
    REQUIRE(a.size() == b.size());
    for (auto& [name, tensor] : a) CHECK(tensor == b.at(name));
}

TEST_CASE("classifier separates a brightness-coded pool") {
    auto train_pool = separable_pool(100, 1000, 32, 5);
    data::TrainingSet ts;
    ts.pool = train_pool;
    auto val = separable_pool(20, 200, 32, 6);

    eval::ClassifierTrainConfig cfg;
    cfg.epochs = 20;
    cfg.base_channels = 16;
    cfg.patience = 0;
    cfg.seed = 9;
    auto trained = eval::train_classifier(ts, val, cfg);
    CHECK(trained.best_val_f1 >= 0.95);

    // Held-out performance matches: restore and score a fresh pool.
    auto net = models::restore_net(trained.checkpoint);
    auto test = separable_pool(20, 200, 32, 7);
    auto [probs, labels] = eval::classifier_predict(net, test);
    auto m = eval::f1_score(eval::confusion_from(probs, labels, 0.5));
    CHECK(m.f1 >= 0.9);
}

TEST_CASE("classifier training is deterministic") {
    auto pool = separable_pool(16, 32, 16, 8);
    data::TrainingSet ts;
    ts.pool = pool;
    auto val = separable_pool(4, 8, 16, 9);
    eval::ClassifierTrainConfig cfg;
    cfg.epochs = 2;
    cfg.base_channels = 8;
    cfg.batch_size = 8;
    cfg.seed = 33;
    auto a = eval::train_classifier(ts, val, cfg);
    auto b = eval::train_classifier(ts, val, cfg);
    REQUIRE(a.checkpoint.tensors.size() == b.checkpoint.tensors.size());
    for (std::size_t i = 0; i < a.checkpoint.tensors.size(); ++i)
        CHECK(a.checkpoint.tensors[i].second.data == b.checkpoint.tensors[i].second.data);
    CHECK(a.best_val_f1 == b.best_val_f1);
}

TEST_CASE("classifier rejects degenerate inputs") {
    data::TrainingSet ts;
    ts.pool = filter_label(separable_pool(8, 8, 16, 2), data::Label::Mass);
    auto val = separable_pool(2, 4, 16, 3);
    eval::ClassifierTrainConfig cfg;
    cfg.epochs = 1;
    cfg.base_channels = 8;
    CHECK_THROWS_AS(eval::train_classifier(ts, val, cfg), InvalidInput);

    data::TrainingSet empty;
    CHECK_THROWS_AS(eval::train_classifier(empty, val, cfg), InvalidInput);
}

TEST_CASE("flip-augmented training differs from plain training") {
    auto pool = separable_pool(16, 32, 16, 8);
    auto val = separable_pool(12, 24, 16, 9);
    eval::ClassifierTrainConfig cfg;
    cfg.epochs = 12;
    cfg.base_channels = 8;
    cfg.batch_size = 8;
    cfg.seed = 33;
    data::TrainingSet plain{pool, false};
    data::TrainingSet flipped{pool, true};
    auto a = eval::train_classifier(plain, val, cfg);
    auto b = eval::train_classifier(flipped, val, cfg);
    REQUIRE(a.best_epoch > 0); // learned past the baseline, so flips had a chance to matter
    REQUIRE(b.best_epoch > 0);
    bool same = true;
    for (std::size_t i = 0; i < a.checkpoint.tensors.size(); ++i)
        if (a.checkpoint.tensors[i].second.data != b.checkpoint.tensors[i].second.data)
            same = false;
    CHECK_FALSE(same);
}

TEST_CASE("matrix preparation splits by class with the floor rule") {
    auto cfg = small_matrix_config(2026);
    auto positives = filter_label(separable_pool(60, 0, 16, 11), data::Label::Mass);
    auto negatives = filter_label(separable_pool(0, 600, 16, 12), data::Label::Normal);
    auto prep = eval::prepare_matrix(cfg, positives, negatives);

    CHECK(prep.positive_split.train.size() == 36);  // floor(0.60*60)
    CHECK(prep.positive_split.validation.size() == 3); // floor(0.066*60)
    CHECK(prep.positive_split.test.size() == 21);
    CHECK(prep.negative_split.train.size() == 360);
    CHECK(prep.negative_split.validation.size() == 39);
    CHECK(prep.negative_split.test.size() == 201);

    // Fixed evaluation pools combine both classes.
    CHECK(prep.validation.size() == 3 + 39);
    CHECK(prep.test.size() == 21 + 201);
    CHECK(prep.validation.count(data::Label::Mass) == 3);
    CHECK(prep.test.count(data::Label::Mass) == 21);

    // Capacity checks: k beyond the positive train split must throw.
    auto bad = cfg;
    bad.k_values = {37};
    CHECK_THROWS_AS(eval::prepare_matrix(bad, positives, negatives), InvalidInput);
    // Negative demand ratio*max_k beyond the negative train split must throw.
    auto bad2 = cfg;
    bad2.imbalance_ratio = 100; // needs 1000 > 360
    CHECK_THROWS_AS(eval::prepare_matrix(bad2, positives, negatives), InvalidInput);
}

TEST_CASE("matrix runs produce a sorted, complete, deterministic grid") {
    auto cfg = small_matrix_config(2027);
    auto positives = filter_label(separable_pool(60, 0, 16, 11), data::Label::Mass);
    auto negatives = filter_label(separable_pool(0, 600, 16, 12), data::Label::Normal);
    auto gen = untrained_generator(16, 404);

    auto records = eval::run_matrix(cfg, positives, negatives, &gen);
    REQUIRE(records.size() == 4 * 2 * 2); // strategies x k x reps

    // Sorted by (strategy, k, repetition); every cell present exactly once.
    std::set<std::tuple<int, std::size_t, int>> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        seen.insert({int(r.strategy), r.k, r.repetition});
        CHECK(r.threshold == 0.5);
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= 1.0);
        if (i > 0) {
            const auto& q = records[i - 1];
            CHECK(std::make_tuple(int(q.strategy), q.k, q.repetition) <
                  std::make_tuple(int(r.strategy), r.k, r.repetition));
        }
    }
    CHECK(seen.size() == records.size());

    // Bitwise repeatability.
    auto again = eval::run_matrix(cfg, positives, negatives, &gen);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(again[i].f1 == records[i].f1);
        CHECK(again[i].precision == records[i].precision);
        CHECK(again[i].recall == records[i].recall);
        CHECK(again[i].seed == records[i].seed);
    }

    // Scheduling independence.
    auto parallel_cfg = cfg;
    parallel_cfg.jobs = 3;
    auto par = eval::run_matrix(parallel_cfg, positives, negatives, &gen);
    REQUIRE(par.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(par[i].f1 == records[i].f1);
        CHECK(par[i].precision == records[i].precision);
        CHECK(par[i].recall == records[i].recall);
    }
}

TEST_CASE("strategies that need synthetic patches demand a generator") {
    auto cfg = small_matrix_config(2028);
    auto positives = filter_label(separable_pool(60, 0, 16, 11), data::Label::Mass);
    auto negatives = filter_label(separable_pool(0, 600, 16, 12), data::Label::Normal);
    CHECK_THROWS_AS(eval::run_matrix(cfg, positives, negatives, nullptr), InvalidInput);

    auto real_only = cfg;
    real_only.strategies = {eval::Strategy::Org, eval::Strategy::AugOrg};
    auto records = eval::run_matrix(real_only, positives, negatives, nullptr);
    CHECK(records.size() == 2 * 2 * 2);
}

TEST_CASE("a single cell recomputes to the same value as the full grid") {
    auto cfg = small_matrix_config(2029);
    auto positives = filter_label(separable_pool(60, 0, 16, 11), data::Label::Mass);
    auto negatives = filter_label(separable_pool(0, 600, 16, 12), data::Label::Normal);
    auto gen = untrained_generator(16, 404);
    auto records = eval::run_matrix(cfg, positives, negatives, &gen);

    auto prep = eval::prepare_matrix(cfg, positives, negatives);
    auto rep = eval::prepare_repetition(cfg, prep, 1, &gen);
    auto cell = eval::evaluate_strategy(eval::Strategy::Gan, 10, rep, prep, cfg);
    auto it = std::find_if(records.begin(), records.end(), [](const eval::MetricsRecord& r) {
        return r.strategy == eval::Strategy::Gan && r.k == 10 && r.repetition == 1;
    });
    REQUIRE(it != records.end());
    CHECK(cell.f1 == it->f1);
    CHECK(cell.precision == it->precision);
    CHECK(cell.recall == it->recall);
    CHECK(cell.seed == it->seed);
}

TEST_CASE("summarize groups by strategy and size") {
    std::vector<eval::MetricsRecord> records;
    for (int rep = 0; rep < 3; ++rep) {
        eval::MetricsRecord r;
        r.strategy = eval::Strategy::Org;
        r.k = 100;
        r.repetition = rep;
        r.f1 = 0.5 + 0.1 * rep; // 0.5, 0.6, 0.7
        records.push_back(r);
    }
    eval::MetricsRecord solo;
    solo.strategy = eval::Strategy::AugGan;
    solo.k = 250;
    solo.f1 = 0.9;
    records.push_back(solo);

    auto rows = eval::summarize(records);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].strategy == eval::Strategy::Org);
    CHECK(rows[0].k == 100);
    CHECK(rows[0].n == 3);
    CHECK(rows[0].f1_mean == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(rows[0].f1_std == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(rows[1].strategy == eval::Strategy::AugGan);
    CHECK(rows[1].n == 1);
    CHECK(rows[1].f1_std == 0.0);
}

TEST_CASE("results csv round trips exactly") {
    TempDir dir("results");
    std::vector<eval::MetricsRecord> records;
    Rng rng(77);
    for (auto strat : eval::kAllStrategies)
        for (std::size_t k : {25u, 50u})
            for (int rep = 0; rep < 2; ++rep) {
                eval::MetricsRecord r;
                r.strategy = strat;
                r.k = k;
                r.repetition = rep;
                r.seed = rng.next_u64();
                r.precision = rng.uniform01();
                r.recall = rng.uniform01();
                r.f1 = rng.uniform01();
                records.push_back(r);
            }
    const auto path = dir.path / "results.csv";
    eval::write_results_csv(records, path);
    auto loaded = eval::read_results_csv(path);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].strategy == records[i].strategy);
        CHECK(loaded[i].k == records[i].k);
        CHECK(loaded[i].repetition == records[i].repetition);
        CHECK(loaded[i].seed == records[i].seed);
        CHECK(loaded[i].precision == records[i].precision);
        CHECK(loaded[i].recall == records[i].recall);
        CHECK(loaded[i].f1 == records[i].f1);
        CHECK(loaded[i].threshold == records[i].threshold);
    }
    // Writing the loaded records reproduces the file byte for byte.
    const auto path2 = dir.path / "results2.csv";
    eval::write_results_csv(loaded, path2);
    CHECK(testutil::file_bytes_equal(path, path2));

    std::ofstream bad(dir.path / "bad.csv");
    bad << "wrong,header\n1,2\n";
    bad.close();
    CHECK_THROWS_AS(eval::read_results_csv(dir.path / "bad.csv"), IoError);
    CHECK_THROWS_AS(eval::read_results_csv(dir.path / "missing.csv"), IoError);
}

TEST_CASE("report emits the full artifact set") {
    TempDir dir("report");
    std::vector<eval::MetricsRecord> records;
    Rng rng(31);
    for (auto strat : eval::kAllStrategies)
        for (std::size_t k : {25u, 50u, 100u})
            for (int rep = 0; rep < 3; ++rep) {
                eval::MetricsRecord r;
                r.strategy = strat;
                r.k = k;
                r.repetition = rep;
                r.f1 = 0.4 + 0.4 * double(k) / 100.0 + 0.02 * rep;
                r.precision = r.f1;
                r.recall = r.f1;
                records.push_back(r);
            }
    eval::emit_report(records, dir.path);
    CHECK(std::filesystem::exists(dir.path / "results.csv"));
    CHECK(std::filesystem::exists(dir.path / "summary.csv"));
    REQUIRE(std::filesystem::exists(dir.path / "f1_vs_k.png"));

    auto bytes = testutil::read_bytes(dir.path / "f1_vs_k.png");
    REQUIRE(bytes.size() > 8);
    const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    for (int i = 0; i < 8; ++i) CHECK((unsigned char)bytes[i] == sig[i]);

    std::ifstream sum(dir.path / "summary.csv");
    std::string header;
    std::getline(sum, header);
    CHECK(header == "strategy,k,f1_mean,f1_std,n");
    int rows = 0;
    for (std::string line; std::getline(sum, line);)
        if (!line.empty()) rows++;
    CHECK(rows == 4 * 3);
}

TEST_CASE("plot writer copes with a single record") {
    TempDir dir("plot1");
    eval::MetricsRecord r;
    r.strategy = eval::Strategy::Org;
    r.k = 100;
    r.f1 = 0.5;
    eval::write_f1_plot({r}, dir.path / "one.png");
    CHECK(std::filesystem::exists(dir.path / "one.png"));
    CHECK_THROWS_AS(eval::write_f1_plot({}, dir.path / "none.png"), InvalidInput);
}

TEST_CASE("phantom-backed matrix improves with k") {
    // Sanity check of the full pipeline at desk scale: more positives should
    // not make the classifier dramatically worse.
    data::PhantomConfig pcfg;
    pcfg.image_size = 16;
    pcfg.lesion_radius_min = 2;
    pcfg.lesion_radius_max = 5;
    pcfg.n_positive = 80;
    pcfg.n_negative = 400;
    pcfg.seed = 505;
    auto pool = data::generate_phantom_dataset(pcfg);
    auto positives = filter_label(pool, data::Label::Mass);
    auto negatives = filter_label(pool, data::Label::Normal);

    eval::ExperimentMatrixConfig cfg;
    cfg.k_values = {8, 32};
    cfg.imbalance_ratio = 2;
    cfg.repetitions = 2;
    cfg.master_seed = 606;
    cfg.strategies = {eval::Strategy::Org};
    cfg.classifier.epochs = 6;
    cfg.classifier.base_channels = 8;
    cfg.classifier.batch_size = 16;
    auto records = eval::run_matrix(cfg, positives, negatives, nullptr);
    REQUIRE(records.size() == 4);
    auto rows = eval::summarize(records);
    REQUIRE(rows.size() == 2);
    // k=8 first, k=32 second; allow noise but catch total collapse.
    CHECK(rows[1].f1_mean >= rows[0].f1_mean - 0.25);
}
