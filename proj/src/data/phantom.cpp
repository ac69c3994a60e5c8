#include "ganaug/data/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ganaug/data/normalize.hpp"
#include "ganaug/errors.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::data {

namespace {

constexpr double kPi = 3.14159265358979323846;

// White noise smoothed by a separable Gaussian (reflected borders), then
// mapped to a fixed sub-range so lesions have contrast headroom.
Image correlated_background(int size, double corr_len, Rng& rng) {
    Image noise(size, size);
    for (auto& v : noise.pix) v = static_cast<float>(rng.normal());

    const double sigma = std::max(corr_len, 0.3);
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        ksum += kernel[i + radius];
    }
    for (auto& k : kernel) k /= ksum;

    auto reflect = [size](int i) {
        if (i < 0) i = -i - 1;
        if (i >= size) i = 2 * size - 1 - i;
        return i;
    };

    Image tmp(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * noise.at(r, reflect(c + i));
            tmp.at(r, c) = static_cast<float>(acc);
        }
    Image smooth(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp.at(reflect(r + i), c);
            smooth.at(r, c) = static_cast<float>(acc);
        }

    return normalize_to_range(smooth, 0.10f, 0.55f);
}

// Additive elliptical Gaussian blob of random radius/eccentricity/orientation.
void add_lesion(Image& img, const PhantomConfig& cfg, Rng& rng) {
    const double radius = rng.uniform(cfg.lesion_radius_min, cfg.lesion_radius_max);
    const double contrast = rng.uniform(cfg.lesion_contrast_min, cfg.lesion_contrast_max);
    const double axis_ratio = rng.uniform(0.55, 1.0);
    const double theta = rng.uniform(0.0, kPi);

    const double cx = (img.w - 1) / 2.0;
    const double cy = (img.h - 1) / 2.0;
    const double sa = radius / 2.0;              // Gaussian sigma along the major axis
    const double sb = radius * axis_ratio / 2.0; // and the minor axis
    const double ct = std::cos(theta), st = std::sin(theta);

    for (int r = 0; r < img.h; ++r)
        for (int c = 0; c < img.w; ++c) {
            const double dx = c - cx, dy = r - cy;
            const double u = (dx * ct + dy * st) / sa;
            const double v = (-dx * st + dy * ct) / sb;
            const double bump = contrast * std::exp(-0.5 * (u * u + v * v));
            img.at(r, c) = static_cast<float>(std::clamp(img.at(r, c) + bump, 0.0, 1.0));
        }
}

Patch make_patch(const PhantomConfig& cfg, Label label, int index) {
    const std::uint64_t stream = label == Label::Mass ? 1 : 2;
    Rng rng(derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(index)));

    Patch p;
    p.label = label;
    p.source = Source::Real;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%06d", label == Label::Mass ? "mass" : "normal", index);
    p.id = buf;
    p.pixels = correlated_background(cfg.image_size, cfg.background_correlation_length, rng);
    if (label == Label::Mass) add_lesion(p.pixels, cfg, rng);
    return p;
}

} // namespace

void PhantomConfig::validate() const {
    if (image_size < 8) throw InvalidInput("phantom: image_size too small");
    if (n_positive < 0 || n_negative < 0) throw InvalidInput("phantom: negative patch count");
    if (!(lesion_radius_min > 0.0 && lesion_radius_min <= lesion_radius_max &&
          lesion_radius_max < image_size / 2.0))
        throw InvalidInput("phantom: lesion radius range must satisfy 0 < min <= max < size/2");
    if (!(lesion_contrast_min >= 0.0 && lesion_contrast_min <= lesion_contrast_max &&
          lesion_contrast_max <= 1.0))
        throw InvalidInput("phantom: lesion contrast range must lie in [0,1]");
    if (background_correlation_length <= 0.0)
        throw InvalidInput("phantom: background correlation length must be positive");
}

PatchPool generate_phantom_dataset(const PhantomConfig& config) {
    config.validate();
    PatchPool pool;
    for (int i = 0; i < config.n_positive; ++i) pool.add(make_patch(config, Label::Mass, i));
    for (int i = 0; i < config.n_negative; ++i) pool.add(make_patch(config, Label::Normal, i));
    return pool;
}

} // namespace ganaug::data
