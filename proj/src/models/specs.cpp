#include "ganaug/models/specs.hpp"

#include "ganaug/errors.hpp"

namespace ganaug::models {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2i(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

} // namespace

int stage_count(int image_size) { return log2i(image_size) - 2; }

int default_base_channels(int image_size) { return 1024 * image_size / 128; }

int halving_pad(int kernel_size) {
    return kernel_size % 2 == 1 ? (kernel_size - 1) / 2 : kernel_size / 2 - 1;
}

int doubling_pad(int kernel_size) { return (kernel_size - 2) / 2; }

void GeneratorSpec::validate() const {
    if (!power_of_two(image_size) || image_size < 8 || image_size > 256)
        throw InvalidInput("generator image_size must be a power of two in [8,256]");
    if (latent_dim < 1) throw InvalidInput("latent_dim must be positive");
    if (kernel_size < 2 || kernel_size % 2 != 0)
        throw InvalidInput("generator kernel_size must be even so stride 2 tiles it evenly");
    const int base = resolved_base();
    const int div = 1 << (stages() - 1);
    if (base % div != 0)
        throw InvalidInput("base_channels must be divisible by 2^(stages-1)");
}

void DiscriminatorSpec::validate() const {
    if (!power_of_two(image_size) || image_size < 8 || image_size > 256)
        throw InvalidInput("discriminator image_size must be a power of two in [8,256]");
    if (kernel_size < 2) throw InvalidInput("discriminator kernel_size must be >= 2");
    const int base = resolved_base();
    const int div = 1 << (stages() - 1);
    if (base % div != 0)
        throw InvalidInput("base_channels must be divisible by 2^(stages-1)");
}

bool kernel_sizes_matched(const GeneratorSpec& g, const DiscriminatorSpec& d) {
    return g.kernel_size == d.kernel_size;
}

} // namespace ganaug::models
