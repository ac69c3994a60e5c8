#include "ganaug/data/flip.hpp"

namespace ganaug::data {

Image hflip(const Image& img) {
    Image out(img.h, img.w);
    for (int r = 0; r < img.h; ++r)
        for (int c = 0; c < img.w; ++c) out.at(r, c) = img.at(r, img.w - 1 - c);
    return out;
}

Image vflip(const Image& img) {
    Image out(img.h, img.w);
    for (int r = 0; r < img.h; ++r)
        for (int c = 0; c < img.w; ++c) out.at(r, c) = img.at(img.h - 1 - r, c);
    return out;
}

Patch flip_augment(const Patch& patch, Rng& rng) {
    const bool do_h = rng.bernoulli(0.5);
    const bool do_v = rng.bernoulli(0.5);
    Patch out = patch;
    if (do_h) out.pixels = hflip(out.pixels);
    if (do_v) out.pixels = vflip(out.pixels);
    return out;
}

} // namespace ganaug::data
