#pragma once

#include <cstdint>
#include <string>

namespace ganaug::models {

// Shared sizing rules for the convolutional models. Images are square,
// single-channel, with side a power of two; every stage halves or doubles
// the side with stride 2, bottoming out at 4x4.

int stage_count(int image_size);
int default_base_channels(int image_size);
// Padding that makes a stride-2 conv halve the side exactly.
int halving_pad(int kernel_size);
// Padding that makes a stride-2 transposed conv double the side exactly
// (kernel must be even).
int doubling_pad(int kernel_size);

struct GeneratorSpec {
    int latent_dim = 200;
    int image_size = 128;
    int base_channels = 0; // 0 -> default_base_channels(image_size)
    int kernel_size = 4;

    int stages() const { return stage_count(image_size); }
    int resolved_base() const {
        return base_channels > 0 ? base_channels : default_base_channels(image_size);
    }
    void validate() const;
};

struct DiscriminatorSpec {
    int image_size = 128;
    int base_channels = 0;
    int kernel_size = 5;

    int stages() const { return stage_count(image_size); }
    int resolved_base() const {
        return base_channels > 0 ? base_channels : default_base_channels(image_size);
    }
    void validate() const;
};

// The binary patch classifier reuses the discriminator topology.
using ClassifierSpec = DiscriminatorSpec;

// Diagnostic for the GAN pairing: matched kernel sizes are allowed but have
// been observed to produce lockstep artifacts, so the trainer warns.
bool kernel_sizes_matched(const GeneratorSpec& g, const DiscriminatorSpec& d);

} // namespace ganaug::models
