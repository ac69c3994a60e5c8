#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ganaug/data/patch.hpp"
#include "ganaug/models/checkpoint.hpp"
#include "ganaug/models/specs.hpp"
#include "ganaug/nn/adam.hpp"
#include "ganaug/nn/net.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::gan {

struct LatentSpec {
    int dim = 200;
    // Min-max rescale each latent batch to [-1,1] before the generator.
    bool normalize_to_unit_range = true;
};

struct GanTrainConfig {
    int batch_size = 64;
    int epochs = 300;
    double learning_rate_d = 2e-4;
    double learning_rate_g = 2e-4;
    double adam_beta1 = 0.5;
    double adam_beta2 = 0.999;
    double real_label = 0.9; // one-sided label smoothing target for reals
    bool flip_augment_real = true;
    LatentSpec latent;
    std::uint64_t seed = 0;
    int sample_grid_every = 0; // write an 8x8 sample sheet every N epochs; 0 = off
    int base_channels = 0;     // 0 = default for the image size
    int generator_kernel = 4;
    int discriminator_kernel = 5;

    void validate() const;
};

struct TrainLogRow {
    int epoch = 0; // 1-based
    double loss_d = 0, loss_g = 0;
    double d_real_mean = 0, d_fake_mean = 0;
    double wall_seconds = 0;
};

struct StepStats {
    double loss_d = 0, loss_g = 0;
    double d_real_mean = 0, d_fake_mean = 0;
};

struct GanTrainState {
    GanTrainConfig config;
    models::GeneratorSpec gspec;
    models::DiscriminatorSpec dspec;
    nn::Net<float> g, d;
    nn::Adam<float> opt_g, opt_d;
    Rng latent_rng{0};
    int epoch = 0; // 1-based while training
    int step = 0;  // 1-based within the epoch
};

GanTrainState init_gan_training(const GanTrainConfig& config, int image_size);

// Draw n latent vectors as a [n,dim] tensor per the latent spec.
nn::Tensor<float> sample_latents(Rng& rng, std::size_t n, const LatentSpec& latent);

// One alternating optimization step on a real batch (pixels in [0,1],
// already flip-augmented by the caller when enabled):
// latents -> fakes -> discriminator update on reals+fakes -> generator
// update against the refreshed discriminator.
StepStats train_step(GanTrainState& state, const nn::Tensor<float>& real_batch);

struct GanTrainResult {
    models::Checkpoint generator;
    models::Checkpoint discriminator;
    std::vector<TrainLogRow> log;
};

// Full training run over a Mass-only pool. When out_dir is non-empty, writes
// training_log.csv, periodic sample sheets, and both checkpoints there.
GanTrainResult train_gan(const GanTrainConfig& config, const data::PatchPool& reals,
                         const std::filesystem::path& out_dir = {});

void write_training_log(const std::vector<TrainLogRow>& log, const std::filesystem::path& path);

} // namespace ganaug::gan
