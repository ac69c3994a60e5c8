#pragma once

#include <cstdint>
#include <vector>

#include "ganaug/models/specs.hpp"
#include "ganaug/nn/net.hpp"

namespace ganaug::models {

nn::Net<float> build_generator(const GeneratorSpec& spec, std::uint64_t seed);
nn::Net<float> build_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed);
nn::Net<float> build_classifier(const ClassifierSpec& spec, std::uint64_t seed);

// latents [B,latent_dim] -> images [B,1,S,S] in [-1,1].
nn::Tensor<float> generator_forward(nn::Net<float>& g, const nn::Tensor<float>& latents);

// images [B,1,S,S] with values in [0,1] -> per-sample probability of the
// positive class, strictly inside (0,1).
std::vector<double> discriminator_forward(nn::Net<float>& d, const nn::Tensor<float>& images);
inline std::vector<double> classifier_forward(nn::Net<float>& c, const nn::Tensor<float>& images) {
    return discriminator_forward(c, images);
}

double sigmoid_open01(double logit);

std::size_t parameter_count(nn::Net<float>& net);
std::size_t parameter_count(const GeneratorSpec& spec);
std::size_t parameter_count(const DiscriminatorSpec& spec);

} // namespace ganaug::models
