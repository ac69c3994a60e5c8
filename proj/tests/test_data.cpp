#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "ganaug/data/extract.hpp"
#include "ganaug/data/flip.hpp"
#include "ganaug/data/io.hpp"
#include "ganaug/data/normalize.hpp"
#include "ganaug/data/phantom.hpp"
#include "ganaug/data/split.hpp"
#include "ganaug/data/training_set.hpp"
#include "ganaug/errors.hpp"
#include "helpers.hpp"

using namespace ganaug;
using namespace ganaug::data;
using testutil::TempDir;

namespace {

// Scalar reference for percentile-clip + min-max, independent of the library.
Image oracle_histogram_normalize(const Image& raw) {
    std::vector<float> sorted(raw.pix);
    std::sort(sorted.begin(), sorted.end());
    auto percentile = [&](double q) {
        const double pos = q * double(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - double(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    const double p1 = percentile(0.01), p99 = percentile(0.99);
    Image out(raw.h, raw.w);
    for (std::size_t i = 0; i < raw.pix.size(); ++i) {
        double v = std::clamp(double(raw.pix[i]), p1, p99);
        out.pix[i] = p99 > p1 ? static_cast<float>((v - p1) / (p99 - p1)) : 0.0f;
    }
    return out;
}

} // namespace

TEST_CASE("rng: deterministic and well-ranged") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform01();
        CHECK(u == b.uniform01());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng c(7);
    std::vector<int> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i;
    auto w = v;
    c.shuffle(w);
    auto sorted = w;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == v);
    CHECK(w != v); // 1/100! chance of false alarm
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("rng: normal has sane moments") {
    Rng rng(123);
    double sum = 0, sumsq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("histogram_normalize: constant image maps to zeros") {
    Image img(8, 8, 7.0f);
    Image out = histogram_normalize(img);
    for (float v : out.pix) CHECK(v == 0.0f);
}

TEST_CASE("histogram_normalize: full-range two-valued image unchanged") {
    Image img(10, 10);
    for (std::size_t i = 0; i < img.pix.size(); ++i) img.pix[i] = i % 2 ? 1.0f : 0.0f;
    Image out = histogram_normalize(img);
    for (std::size_t i = 0; i < img.pix.size(); ++i) CHECK(out.pix[i] == doctest::Approx(img.pix[i]));
}

TEST_CASE("histogram_normalize: linear ramp matches scalar reference") {
    Image img(25, 40); // 1000 pixels, ramp 0..999
    for (std::size_t i = 0; i < img.pix.size(); ++i) img.pix[i] = float(i);
    Image out = histogram_normalize(img);
    Image ref = oracle_histogram_normalize(img);
    for (std::size_t i = 0; i < img.pix.size(); ++i)
        CHECK(out.pix[i] == doctest::Approx(ref.pix[i]).epsilon(1e-5));
    CHECK(out.pix.front() == 0.0f); // below p1, clipped
    CHECK(out.pix.back() == 1.0f);  // above p99, clipped
}

TEST_CASE("histogram_normalize: random images match reference and stay in [0,1]") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        Image img = testutil::random_image(16, 16, rng, -3.0f, 5.0f);
        Image out = histogram_normalize(img);
        Image ref = oracle_histogram_normalize(img);
        for (std::size_t i = 0; i < img.pix.size(); ++i) {
            CHECK(out.pix[i] >= 0.0f);
            CHECK(out.pix[i] <= 1.0f);
            CHECK(out.pix[i] == doctest::Approx(ref.pix[i]).epsilon(1e-4));
        }
    }
}

TEST_CASE("normalize_to_range: closed forms") {
    std::vector<float> mid{0.0f, 0.5f, 1.0f};
    auto out = normalize_to_range(mid, -1.0f, 1.0f);
    CHECK(out[1] == doctest::Approx(0.0f));
    std::vector<float> constant(5, 3.25f);
    auto c = normalize_to_range(constant, 0.0f, 1.0f);
    for (float v : c) CHECK(v == doctest::Approx(0.5f));
    std::vector<float> ramp{0.0f, 1.0f, 2.0f, 3.0f};
    auto r = normalize_to_range(ramp, 0.0f, 1.0f);
    CHECK(r[0] == doctest::Approx(0.0f));
    CHECK(r[1] == doctest::Approx(1.0f / 3));
    CHECK(r[2] == doctest::Approx(2.0f / 3));
    CHECK(r[3] == doctest::Approx(1.0f));
    CHECK_THROWS_AS(normalize_to_range(ramp, 1.0f, 1.0f), InvalidInput);
}

TEST_CASE("flip: involution and symmetric fixed point") {
    Rng rng(9);
    Image img = testutil::random_image(8, 8, rng);
    Image h2 = hflip(hflip(img));
    Image v2 = vflip(vflip(img));
    CHECK(h2.pix == img.pix);
    CHECK(v2.pix == img.pix);
    Image hv = hflip(vflip(img));
    Image vh = vflip(hflip(img));
    CHECK(hv.pix == vh.pix);

    Patch constant;
    constant.id = "c";
    constant.label = Label::Mass;
    constant.pixels = Image(8, 8, 0.3f);
    for (int t = 0; t < 16; ++t) {
        Patch out = flip_augment(constant, rng);
        CHECK(out.pixels.pix == constant.pixels.pix);
        CHECK(out.id == "c");
        CHECK(out.label == Label::Mass);
    }
}

TEST_CASE("flip_augment: all four outcomes near 1/4") {
    Rng rng(11);
    Image img(2, 2);
    img.pix = {0.1f, 0.2f, 0.3f, 0.4f};
    Patch p;
    p.pixels = img;
    int counts[4] = {0, 0, 0, 0};
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
        Patch out = flip_augment(p, rng);
        const bool h = out.pixels.at(0, 0) != img.at(0, 0) && out.pixels.at(0, 0) == img.at(0, 1);
        // identify outcome by where the 0.1 pixel landed
        int outcome = -1;
        if (out.pixels.pix == img.pix) outcome = 0;
        else if (out.pixels.pix == hflip(img).pix) outcome = 1;
        else if (out.pixels.pix == vflip(img).pix) outcome = 2;
        else if (out.pixels.pix == vflip(hflip(img)).pix) outcome = 3;
        REQUIRE(outcome >= 0);
        ++counts[outcome];
        (void)h;
    }
    for (int i = 0; i < 4; ++i) CHECK(std::abs(counts[i] / double(n) - 0.25) < 0.02);
}

TEST_CASE("phantom: count contract and determinism") {
    PhantomConfig cfg;
    cfg.image_size = 16;
    cfg.lesion_radius_min = 2;
    cfg.lesion_radius_max = 5;
    cfg.n_positive = 0;
    cfg.n_negative = 5;
    cfg.seed = 3;
    PatchPool pool = generate_phantom_dataset(cfg);
    CHECK(pool.size() == 5);
    CHECK(pool.count(Label::Mass) == 0);
    CHECK(pool.count(Label::Normal) == 5);

    cfg.n_positive = 4;
    PatchPool a = generate_phantom_dataset(cfg);
    PatchPool b = generate_phantom_dataset(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].pixels.pix == b[i].pixels.pix);
    }
    cfg.seed = 4;
    PatchPool c = generate_phantom_dataset(cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size() && !any_diff; ++i)
        any_diff = a[i].pixels.pix != c[i].pixels.pix;
    CHECK(any_diff);
}

TEST_CASE("phantom: pixels in range, masses brighter in the center") {
    PhantomConfig cfg;
    cfg.image_size = 32;
    cfg.n_positive = 200;
    cfg.n_negative = 200;
    cfg.lesion_contrast_min = 0.2;
    cfg.lesion_contrast_max = 0.4;
    cfg.seed = 21;
    PatchPool pool = generate_phantom_dataset(cfg);
    double mass_center = 0, normal_center = 0;
    int n_mass = 0, n_normal = 0;
    for (const Patch& p : pool.patches()) {
        REQUIRE(p.side() == 32);
        for (float v : p.pixels.pix) {
            REQUIRE(v >= 0.0f);
            REQUIRE(v <= 1.0f);
        }
        double acc = 0;
        const int lo = 16 - 4, hi = 16 + 5; // central 9x9
        for (int r = lo; r < hi; ++r)
            for (int c = lo; c < hi; ++c) acc += p.pixels.at(r, c);
        acc /= 81.0;
        if (p.label == Label::Mass) {
            mass_center += acc;
            ++n_mass;
        } else {
            normal_center += acc;
            ++n_normal;
        }
    }
    CHECK(n_mass == 200);
    CHECK(n_normal == 200);
    CHECK(mass_center / n_mass > normal_center / n_normal);
}

TEST_CASE("extract: n_negative=0 gives exactly the per-box positives") {
    AnnotatedImage img;
    Rng rng(2);
    img.pixels = testutil::random_image(128, 128, rng);
    img.mass_boxes = {{10, 10, 20, 20}, {80, 70, 25, 25}};
    PatchPool pool = extract_patches(img, 32, 0, 5);
    CHECK(pool.size() == 2);
    CHECK(pool.count(Label::Mass) == 2);
}

TEST_CASE("extract: full-cover box makes negatives infeasible") {
    AnnotatedImage img;
    Rng rng(2);
    img.pixels = testutil::random_image(64, 64, rng);
    img.mass_boxes = {{0, 0, 64, 64}};
    CHECK_THROWS_AS(extract_patches(img, 16, 1, 5), InfeasibleSampling);
}

TEST_CASE("extract: negatives never intersect any box (brute force)") {
    AnnotatedImage img;
    Rng rng(3);
    img.pixels = testutil::random_image(256, 256, rng);
    img.mass_boxes = {{0, 0, 64, 64}};
    PatchPool pool = extract_patches(img, 64, 10, 123);
    REQUIRE(pool.size() == 11);
    // mass patch is centered on the box center, clamped to bounds
    int negatives = 0;
    for (const Patch& p : pool.patches()) {
        if (p.label != Label::Normal) continue;
        ++negatives;
        // recover placement by matching pixels against every feasible spot
        bool found_valid = false;
        for (int y = 0; y + 64 <= 256 && !found_valid; ++y)
            for (int x = 0; x + 64 <= 256 && !found_valid; ++x) {
                bool same = true;
                for (int r = 0; r < 64 && same; r += 7)
                    for (int c = 0; c < 64 && same; c += 7)
                        same = p.pixels.at(r, c) == img.pixels.at(y + r, x + c);
                if (same) {
                    Box candidate{x, y, 64, 64};
                    CHECK_FALSE(candidate.intersects(img.mass_boxes[0]));
                    found_valid = true;
                }
            }
        CHECK(found_valid);
    }
    CHECK(negatives == 10);
}

TEST_CASE("split: floor rule and exhaustive partition") {
    PatchPool pool = testutil::make_pool(2215, 0, 4, 17);
    DatasetSplit s = split_dataset(pool, {0.60, 0.066, 0.334}, 99);
    CHECK(s.train.size() == 1329);
    CHECK(s.validation.size() == 146);
    CHECK(s.test.size() == 740);

    std::set<std::string> seen;
    for (const Patch& p : s.train.patches()) seen.insert(p.id);
    for (const Patch& p : s.validation.patches()) seen.insert(p.id);
    for (const Patch& p : s.test.patches()) seen.insert(p.id);
    CHECK(seen.size() == 2215);

    PatchPool tiny = testutil::make_pool(3, 0, 4, 18);
    DatasetSplit t = split_dataset(tiny, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1);
    CHECK(t.train.size() == 1);
    CHECK(t.validation.size() == 1);
    CHECK(t.test.size() == 1);

    DatasetSplit again = split_dataset(pool, {0.60, 0.066, 0.334}, 99);
    for (std::size_t i = 0; i < s.train.size(); ++i) CHECK(s.train[i].id == again.train[i].id);

    CHECK_THROWS_AS(split_dataset(pool, {0.5, 0.5, 0.5}, 1), InvalidInput);
}

TEST_CASE("nested subsets: ladder properties") {
    PatchPool one = testutil::make_pool(1, 0, 4, 5);
    SubsetLadder l1 = sample_nested_subsets(one, {1}, 7);
    CHECK(l1.subsets.at(1).size() == 1);
    CHECK(l1.subsets.at(1)[0] == one[0].id);

    PatchPool pool = testutil::make_pool(1329, 0, 4, 6);
    std::vector<std::size_t> sizes{100, 250, 500, 750, 1000, 1300};
    SubsetLadder l = sample_nested_subsets(pool, sizes, 8);
    for (std::size_t k : sizes) CHECK(l.subsets.at(k).size() == k);
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        const auto& small = l.subsets.at(sizes[i - 1]);
        const auto& big = l.subsets.at(sizes[i]);
        for (std::size_t j = 0; j < small.size(); ++j) CHECK(small[j] == big[j]);
    }

    CHECK_THROWS_AS(sample_nested_subsets(one, {2}, 7), InvalidInput);
    CHECK_THROWS_AS(sample_nested_subsets(pool, {100, 100}, 7), InvalidInput);
}

TEST_CASE("nested subsets: 100 random nesting probes") {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 5 + rng.uniform_int(60);
        PatchPool pool = testutil::make_pool(n, 0, 4, 1000 + t);
        const std::size_t a = 1 + rng.uniform_int(n - 1);
        const std::size_t b = a + 1 + rng.uniform_int(n - a);
        SubsetLadder l = sample_nested_subsets(pool, {a, b}, rng.next_u64());
        const auto& sa = l.subsets.at(a);
        const auto& sb = l.subsets.at(b);
        std::set<std::string> in_b(sb.begin(), sb.end());
        CHECK(in_b.size() == b);
        for (const auto& id : sa) CHECK(in_b.count(id) == 1);
    }
}

TEST_CASE("training set: strategy composition") {
    PatchPool positives = testutil::make_pool(600, 0, 4, 41);
    PatchPool negatives = testutil::make_pool(0, 6000, 4, 42);
    PatchPool synthetic;
    {
        Rng rng(43);
        for (int i = 0; i < 900; ++i) {
            Patch p = testutil::make_patch("s" + std::to_string(i), Label::Mass, 4, rng);
            p.source = Source::Synthetic;
            synthetic.add(p);
        }
    }
    SubsetLadder ladder = sample_nested_subsets(positives, {100, 500}, 44);

    using eval::Strategy;
    TrainingSet org = build_training_set(500, ladder, positives, negatives, synthetic,
                                         Strategy::Org, 10, 1.5);
    CHECK(org.pool.count(Label::Mass) == 500);
    CHECK(org.pool.count(Label::Normal) == 5000);
    CHECK_FALSE(org.flip_augment);

    TrainingSet gan = build_training_set(100, ladder, positives, negatives, synthetic,
                                         Strategy::Gan, 10, 1.5);
    CHECK(gan.pool.count(Label::Mass) == 250); // 100 real + 150 synthetic
    CHECK(gan.pool.count(Label::Normal) == 1000);
    std::size_t synth_count = 0;
    for (const Patch& p : gan.pool.patches())
        if (p.source == Source::Synthetic) ++synth_count;
    CHECK(synth_count == 150);
    CHECK_FALSE(gan.flip_augment);

    TrainingSet aug_org = build_training_set(100, ladder, positives, negatives, synthetic,
                                             Strategy::AugOrg, 10, 1.5);
    TrainingSet org100 = build_training_set(100, ladder, positives, negatives, synthetic,
                                            Strategy::Org, 10, 1.5);
    REQUIRE(aug_org.pool.size() == org100.pool.size());
    for (std::size_t i = 0; i < org100.pool.size(); ++i)
        CHECK(aug_org.pool[i].id == org100.pool[i].id);
    CHECK(aug_org.flip_augment);

    TrainingSet aug_gan = build_training_set(100, ladder, positives, negatives, synthetic,
                                             Strategy::AugGan, 10, 1.5);
    CHECK(aug_gan.flip_augment);
    CHECK(aug_gan.pool.size() == gan.pool.size());

    // 10:1 exactness for every strategy
    for (auto st : eval::kAllStrategies) {
        TrainingSet ts = build_training_set(100, ladder, positives, negatives, synthetic, st, 10, 1.5);
        std::size_t real_pos = 0;
        for (const Patch& p : ts.pool.patches())
            if (p.label == Label::Mass && p.source == Source::Real) ++real_pos;
        CHECK(ts.pool.count(Label::Normal) == 10 * real_pos);
    }

    CHECK_THROWS_AS(build_training_set(250, ladder, positives, negatives, synthetic,
                                       Strategy::Org, 10, 1.5),
                    InvalidInput);
    PatchPool few_synth;
    CHECK_THROWS_AS(build_training_set(100, ladder, positives, negatives, few_synth,
                                       Strategy::Gan, 10, 1.5),
                    InvalidInput);
}

TEST_CASE("pgm: write/read round trip within quantization") {
    TempDir dir("pgm");
    Rng rng(55);
    Image img = testutil::random_image(16, 16, rng);
    write_pgm(dir.path / "a.pgm", img);
    Image back = read_pgm(dir.path / "a.pgm");
    REQUIRE(back.h == 16);
    REQUIRE(back.w == 16);
    for (std::size_t i = 0; i < img.pix.size(); ++i)
        CHECK(std::abs(back.pix[i] - img.pix[i]) <= 0.5f / 255.0f + 1e-6f);
}

TEST_CASE("pgm: quantization rule and 16-bit reads") {
    TempDir dir("pgm16");
    Image img(1, 3);
    img.pix = {0.0f, 0.5f, 1.0f};
    write_pgm(dir.path / "q.pgm", img);
    Image back = read_pgm(dir.path / "q.pgm");
    CHECK(back.pix[0] == 0.0f);
    CHECK(back.pix[1] == doctest::Approx(128.0f / 255.0f)); // round(0.5*255)=128
    CHECK(back.pix[2] == 1.0f);

    // hand-written 16-bit big-endian file
    std::ofstream os(dir.path / "w.pgm", std::ios::binary);
    os << "P2\n"; // comment-free header path exercised via P5 below
    os.close();
    std::ofstream os2(dir.path / "x.pgm", std::ios::binary);
    os2 << "P5\n# comment line\n2 1\n65535\n";
    const unsigned char bytes[4] = {0xFF, 0xFF, 0x00, 0x00}; // 65535, 0
    os2.write(reinterpret_cast<const char*>(bytes), 4);
    os2.close();
    Image wide = read_pgm(dir.path / "x.pgm");
    REQUIRE(wide.w == 2);
    CHECK(wide.pix[0] == doctest::Approx(1.0f));
    CHECK(wide.pix[1] == doctest::Approx(0.0f));

    CHECK_THROWS_AS(read_pgm(dir.path / "w.pgm"), IoError);  // wrong magic
    std::ofstream os3(dir.path / "t.pgm", std::ios::binary);
    os3 << "P5\n4 4\n255\nab"; // truncated payload
    os3.close();
    CHECK_THROWS_AS(read_pgm(dir.path / "t.pgm"), IoError);
}

TEST_CASE("pool io: manifest round trip preserves labels and sources") {
    TempDir dir("pool");
    PatchPool pool = testutil::make_pool(3, 5, 8, 77);
    {
        // mark one as synthetic to check source round trip
        Patch p = pool[0];
        p.id = "extra_synth";
        p.source = Source::Synthetic;
        pool.add(p);
    }
    save_pool(pool, dir.path);
    CHECK(std::filesystem::exists(dir.path / "manifest.csv"));
    PatchPool back = load_pool(dir.path);
    REQUIRE(back.size() == pool.size());
    CHECK(back.count(Label::Mass) == pool.count(Label::Mass));
    CHECK(back.count(Label::Normal) == pool.count(Label::Normal));
    bool found_synth = false;
    for (const Patch& p : back.patches()) {
        if (p.id == "extra_synth") {
            found_synth = true;
            CHECK(p.source == Source::Synthetic);
        }
    }
    CHECK(found_synth);
    CHECK_THROWS_AS(load_pool(dir.path / "missing"), IoError);
}
