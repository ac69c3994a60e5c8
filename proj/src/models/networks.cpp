#include "ganaug/models/networks.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ganaug/errors.hpp"
#include "ganaug/nn/layers.hpp"

namespace ganaug::models {

using nn::BatchNorm2d;
using nn::Conv2d;
using nn::ConvTranspose2d;
using nn::LeakyReLU;
using nn::Linear;
using nn::Net;
using nn::ReLU;
using nn::Reshape;
using nn::Tanh;
using nn::Tensor;

Net<float> build_generator(const GeneratorSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t base = static_cast<std::size_t>(spec.resolved_base());
    const int n = spec.stages();
    const int k = spec.kernel_size;
    const long pad = doubling_pad(k);
    Net<float> g;
    g.add("project", std::make_unique<Linear<float>>(spec.latent_dim, base * 16));
    g.add("project_reshape", std::make_unique<Reshape<float>>(std::vector<std::size_t>{base, 4, 4}));
    g.add("project_bn", std::make_unique<BatchNorm2d<float>>(base));
    g.add("project_relu", std::make_unique<ReLU<float>>());
    std::size_t ch = base;
    for (int t = 1; t < n; ++t) {
        const std::string name = "up" + std::to_string(t);
        g.add(name, std::make_unique<ConvTranspose2d<float>>(ch, ch / 2, k, 2, pad, false));
        g.add(name + "_bn", std::make_unique<BatchNorm2d<float>>(ch / 2));
        g.add(name + "_relu", std::make_unique<ReLU<float>>());
        ch /= 2;
    }
    g.add("to_image", std::make_unique<ConvTranspose2d<float>>(ch, 1, k, 2, pad, true));
    g.add("to_image_tanh", std::make_unique<Tanh<float>>());
    g.init(seed);
    return g;
}

Net<float> build_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t base = static_cast<std::size_t>(spec.resolved_base());
    const int n = spec.stages();
    const int k = spec.kernel_size;
    const long pad = halving_pad(k);
    Net<float> d;
    std::size_t ch = base >> (n - 1);
    d.add("down1", std::make_unique<Conv2d<float>>(1, ch, k, 2, pad, true));
    d.add("down1_lrelu", std::make_unique<LeakyReLU<float>>(0.2));
    for (int t = 2; t <= n; ++t) {
        const std::string name = "down" + std::to_string(t);
        d.add(name, std::make_unique<Conv2d<float>>(ch, ch * 2, k, 2, pad, false));
        d.add(name + "_bn", std::make_unique<BatchNorm2d<float>>(ch * 2));
        d.add(name + "_lrelu", std::make_unique<LeakyReLU<float>>(0.2));
        ch *= 2;
    }
    d.add("flatten", std::make_unique<Reshape<float>>(std::vector<std::size_t>{ch * 16}));
    d.add("head", std::make_unique<Linear<float>>(ch * 16, 1));
    d.init(seed);
    return d;
}

Net<float> build_classifier(const ClassifierSpec& spec, std::uint64_t seed) {
    return build_discriminator(spec, seed);
}

Tensor<float> generator_forward(Net<float>& g, const Tensor<float>& latents) {
    if (latents.rank() != 2) throw InvalidInput("latents must be [B,latent_dim]");
    return g.forward(latents);
}

double sigmoid_open01(double logit) {
    const double p = 1.0 / (1.0 + std::exp(-logit));
    const double eps = 1e-12;
    return std::min(1.0 - eps, std::max(eps, p));
}

std::vector<double> discriminator_forward(Net<float>& d, const Tensor<float>& images) {
    if (images.rank() != 4 || images.dim(1) != 1)
        throw InvalidInput("images must be [B,1,S,S]");
    Tensor<float> logits = d.forward(images);
    std::vector<double> probs(logits.dim(0));
    for (std::size_t i = 0; i < probs.size(); ++i)
        probs[i] = sigmoid_open01(static_cast<double>(logits.data[i]));
    return probs;
}

std::size_t parameter_count(Net<float>& net) {
    std::size_t n = 0;
    for (auto& p : net.params()) n += p.value->numel();
    return n;
}

std::size_t parameter_count(const GeneratorSpec& spec) {
    Net<float> g = build_generator(spec, 0);
    return parameter_count(g);
}

std::size_t parameter_count(const DiscriminatorSpec& spec) {
    Net<float> d = build_discriminator(spec, 0);
    return parameter_count(d);
}

} // namespace ganaug::models
