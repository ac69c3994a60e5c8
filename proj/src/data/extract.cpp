#include "ganaug/data/extract.hpp"

#include <algorithm>
#include <cstdio>

#include "ganaug/errors.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::data {

namespace {

Image crop(const Image& img, int top, int left, int size) {
    Image out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) out.at(r, c) = img.at(top + r, left + c);
    return out;
}

double tissue_fraction(const AnnotatedImage& image, int top, int left, int size) {
    if (image.background_mask.empty()) return 1.0;
    std::size_t inside = 0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (image.tissue_at(top + r, left + c)) ++inside;
    return static_cast<double>(inside) / (static_cast<double>(size) * size);
}

} // namespace

PatchPool extract_patches(const AnnotatedImage& image, int patch_size, int n_negative,
                          std::uint64_t seed) {
    const int h = image.pixels.h, w = image.pixels.w;
    if (patch_size <= 0 || patch_size > std::min(h, w))
        throw InvalidInput("extract_patches: patch_size exceeds image dimensions");
    if (n_negative < 0) throw InvalidInput("extract_patches: negative n_negative");
    for (const Box& b : image.mass_boxes)
        if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > w || b.y + b.h > h)
            throw InvalidInput("extract_patches: mass box outside image bounds");

    PatchPool pool;
    char buf[32];

    int box_index = 0;
    for (const Box& b : image.mass_boxes) {
        const int cx = b.x + b.w / 2;
        const int cy = b.y + b.h / 2;
        const int left = std::clamp(cx - patch_size / 2, 0, w - patch_size);
        const int top = std::clamp(cy - patch_size / 2, 0, h - patch_size);
        Patch p;
        std::snprintf(buf, sizeof buf, "mass_box_%04d", box_index++);
        p.id = buf;
        p.label = Label::Mass;
        p.source = Source::Real;
        p.pixels = crop(image.pixels, top, left, patch_size);
        pool.add(std::move(p));
    }

    Rng rng(seed);
    const long budget = static_cast<long>(patch_size) * patch_size * 100;
    long attempts = 0;
    int placed = 0;
    while (placed < n_negative) {
        if (attempts >= budget) {
            std::snprintf(buf, sizeof buf, "%d/%d", placed, n_negative);
            throw InfeasibleSampling(std::string("extract_patches: placed only ") + buf +
                                     " negatives within the attempt budget");
        }
        ++attempts;
        const int left = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(w - patch_size + 1)));
        const int top = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(h - patch_size + 1)));
        const Box candidate{left, top, patch_size, patch_size};

        bool clear = true;
        for (const Box& b : image.mass_boxes)
            if (candidate.intersects(b)) {
                clear = false;
                break;
            }
        if (!clear) continue;
        if (tissue_fraction(image, top, left, patch_size) < 0.95) continue;

        Patch p;
        std::snprintf(buf, sizeof buf, "normal_%06d", placed);
        p.id = buf;
        p.label = Label::Normal;
        p.source = Source::Real;
        p.pixels = crop(image.pixels, top, left, patch_size);
        pool.add(std::move(p));
        ++placed;
    }
    return pool;
}

} // namespace ganaug::data
