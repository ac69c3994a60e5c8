#include "ganaug/gan/synthesis.hpp"

#include <algorithm>
#include <cstdio>

#include "ganaug/errors.hpp"
#include "ganaug/gan/training.hpp"
#include "ganaug/models/networks.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::gan {

data::PatchPool synthesize(const models::Checkpoint& generator, std::size_t n,
                           std::uint64_t seed) {
    if (generator.kind != models::ModelKind::Generator)
        throw InvalidInput("synthesis needs a generator checkpoint");
    LatentSpec latent;
    latent.dim = generator.generator_spec.latent_dim;
    auto it = generator.meta.extra.find("latent_minmax");
    latent.normalize_to_unit_range = it == generator.meta.extra.end() || it->second != "0";

    nn::Net<float> g = models::restore_net(generator);
    g.set_training(false);
    Rng rng(seed);
    const int s = generator.generator_spec.image_size;
    constexpr std::size_t kChunk = 64;

    data::PatchPool pool;
    std::size_t made = 0;
    while (made < n) {
        const std::size_t b = std::min(kChunk, n - made);
        nn::Tensor<float> z = sample_latents(rng, b, latent);
        nn::Tensor<float> imgs = g.forward(z);
        for (std::size_t i = 0; i < b; ++i) {
            data::Patch p;
            char id[32];
            std::snprintf(id, sizeof(id), "synth_%06zu", made + i);
            p.id = id;
            p.label = data::Label::Mass;
            p.source = data::Source::Synthetic;
            p.pixels = data::Image(s, s);
            const float* src = imgs.ptr() + i * s * s;
            for (int j = 0; j < s * s; ++j)
                p.pixels.pix[j] = std::clamp((src[j] + 1.0f) * 0.5f, 0.0f, 1.0f);
            pool.add(std::move(p));
        }
        made += b;
    }
    return pool;
}

} // namespace ganaug::gan
