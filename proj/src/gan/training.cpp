#include "ganaug/gan/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "ganaug/data/flip.hpp"
#include "ganaug/data/io.hpp"
#include "ganaug/data/normalize.hpp"
#include "ganaug/errors.hpp"
#include "ganaug/gan/losses.hpp"
#include "ganaug/models/networks.hpp"

namespace ganaug::gan {

void GanTrainConfig::validate() const {
    if (batch_size < 1) throw InvalidInput("batch_size must be positive");
    if (epochs < 1) throw InvalidInput("epochs must be positive");
    if (!(learning_rate_d >= 0) || !(learning_rate_g >= 0))
        throw InvalidInput("learning rates must be non-negative");
    if (!(real_label > 0.0 && real_label <= 1.0))
        throw InvalidInput("real_label must lie in (0,1]");
    if (latent.dim < 1) throw InvalidInput("latent dim must be positive");
    if (sample_grid_every < 0) throw InvalidInput("sample_grid_every must be >= 0");
}

GanTrainState init_gan_training(const GanTrainConfig& config, int image_size) {
    config.validate();
    GanTrainState s;
    s.config = config;
    s.gspec = models::GeneratorSpec{config.latent.dim, image_size, config.base_channels,
                                    config.generator_kernel};
    s.dspec = models::DiscriminatorSpec{image_size, config.base_channels,
                                        config.discriminator_kernel};
    s.gspec.validate();
    s.dspec.validate();
    if (models::kernel_sizes_matched(s.gspec, s.dspec))
        std::cerr << "warning: generator and discriminator share kernel size "
                  << s.gspec.kernel_size << "; mismatched sizes train more stably\n";
    s.g = models::build_generator(s.gspec, derive_seed(config.seed, 1));
    s.d = models::build_discriminator(s.dspec, derive_seed(config.seed, 2));
    s.opt_g = nn::Adam<float>(config.learning_rate_g, config.adam_beta1, config.adam_beta2);
    s.opt_d = nn::Adam<float>(config.learning_rate_d, config.adam_beta1, config.adam_beta2);
    s.latent_rng = Rng(derive_seed(config.seed, 3));
    return s;
}

nn::Tensor<float> sample_latents(Rng& rng, std::size_t n, const LatentSpec& latent) {
    nn::Tensor<float> z({n, static_cast<std::size_t>(latent.dim)});
    for (auto& v : z.data) v = static_cast<float>(rng.normal());
    if (latent.normalize_to_unit_range)
        z.data = data::normalize_to_range(z.data, -1.0f, 1.0f);
    return z;
}

namespace {

void check_real_batch(const nn::Tensor<float>& x, int image_size) {
    if (x.rank() != 4 || x.dim(1) != 1 ||
        x.dim(2) != static_cast<std::size_t>(image_size) || x.dim(3) != x.dim(2))
        throw InvalidInput("real batch must be [B,1,S,S] matching the model");
    for (float v : x.data)
        if (!(v >= 0.0f && v <= 1.0f)) throw InvalidInput("real pixels must lie in [0,1]");
}

nn::Tensor<float> logit_grad(const nn::Tensor<float>& logits, double target) {
    nn::Tensor<float> g(logits.shape);
    const double inv_b = 1.0 / double(logits.dim(0));
    for (std::size_t i = 0; i < logits.numel(); ++i) {
        const double s = 1.0 / (1.0 + std::exp(-double(logits.data[i])));
        g.data[i] = static_cast<float>((s - target) * inv_b);
    }
    return g;
}

double mean_sigmoid(const nn::Tensor<float>& logits) {
    double acc = 0;
    for (float l : logits.data) acc += 1.0 / (1.0 + std::exp(-double(l)));
    return acc / double(logits.numel());
}

} // namespace

StepStats train_step(GanTrainState& state, const nn::Tensor<float>& real_batch) {
    check_real_batch(real_batch, state.gspec.image_size);
    const std::size_t b = real_batch.dim(0);

    nn::Tensor<float> z = sample_latents(state.latent_rng, b, state.config.latent);
    nn::Tensor<float> fakes = state.g.forward(z);
    nn::Tensor<float> fakes01(fakes.shape);
    for (std::size_t i = 0; i < fakes.numel(); ++i)
        fakes01.data[i] = (fakes.data[i] + 1.0f) * 0.5f;

    state.d.zero_grad();
    nn::Tensor<float> logits_r = state.d.forward(real_batch);
    const double loss_d_real = bce_with_logits_mean(logits_r.data, state.config.real_label);
    const double d_real_mean = mean_sigmoid(logits_r);
    state.d.backward(logit_grad(logits_r, state.config.real_label), true, false);

    nn::Tensor<float> logits_f = state.d.forward(fakes01);
    const double loss_d_fake = bce_with_logits_mean(logits_f.data, 0.0);
    const double d_fake_mean = mean_sigmoid(logits_f);
    state.d.backward(logit_grad(logits_f, 0.0), true, false);
    auto d_params = state.d.params();
    state.opt_d.step(d_params);

    state.g.zero_grad();
    nn::Tensor<float> logits_f2 = state.d.forward(fakes01);
    const double loss_g = bce_with_logits_mean(logits_f2.data, 1.0);
    nn::Tensor<float> dfakes01 = state.d.backward(logit_grad(logits_f2, 1.0), false, true);
    for (auto& v : dfakes01.data) v *= 0.5f;
    state.g.backward(dfakes01, true, false);
    auto g_params = state.g.params();
    state.opt_g.step(g_params);

    StepStats st;
    st.loss_d = loss_d_real + loss_d_fake;
    st.loss_g = loss_g;
    st.d_real_mean = d_real_mean;
    st.d_fake_mean = d_fake_mean;
    if (!std::isfinite(st.loss_d) || !std::isfinite(st.loss_g)) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "non-finite loss at epoch %d step %d: loss_d=%g loss_g=%g", state.epoch,
                      state.step, st.loss_d, st.loss_g);
        throw NonFiniteLoss(msg);
    }
    return st;
}

namespace {

void write_sample_grid(nn::Net<float>& g, const models::GeneratorSpec& gspec,
                       const LatentSpec& latent, std::uint64_t seed,
                       const std::filesystem::path& path) {
    constexpr std::size_t kGrid = 8;
    Rng rng(seed);
    nn::Tensor<float> z = sample_latents(rng, kGrid * kGrid, latent);
    const bool was_training = g.training();
    g.set_training(false);
    nn::Tensor<float> imgs = g.forward(z);
    g.set_training(was_training);
    const int s = gspec.image_size;
    data::Image sheet(s * static_cast<int>(kGrid), s * static_cast<int>(kGrid));
    for (std::size_t i = 0; i < kGrid * kGrid; ++i) {
        const int gr = static_cast<int>(i / kGrid) * s;
        const int gc = static_cast<int>(i % kGrid) * s;
        const float* src = imgs.ptr() + i * s * s;
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                sheet.at(gr + r, gc + c) = (src[r * s + c] + 1.0f) * 0.5f;
    }
    data::write_pgm(path, sheet);
}

} // namespace

void write_training_log(const std::vector<TrainLogRow>& log, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << "epoch,loss_d,loss_g,d_real_mean,d_fake_mean,wall_seconds\n";
    char buf[256];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.3f\n", r.epoch, r.loss_d,
                      r.loss_g, r.d_real_mean, r.d_fake_mean, r.wall_seconds);
        os << buf;
    }
}

GanTrainResult train_gan(const GanTrainConfig& config, const data::PatchPool& reals,
                         const std::filesystem::path& out_dir) {
    config.validate();
    if (reals.empty()) throw InvalidInput("real pool is empty");
    if (reals.count(data::Label::Normal) != 0)
        throw InvalidInput("generator trains on the minority class only");
    const int s = reals[0].side();
    for (const auto& p : reals.patches())
        if (p.side() != s || p.pixels.h != p.pixels.w)
            throw InvalidInput("all real patches must be square with one side");
    if (static_cast<int>(reals.size()) < config.batch_size)
        throw InvalidInput("need at least one full batch of reals");

    GanTrainState state = init_gan_training(config, s);
    GanTrainResult out;
    std::ofstream log_os;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        log_os.open(out_dir / "training_log.csv");
        if (!log_os) throw IoError("cannot open training_log.csv under " + out_dir.string());
        log_os << "epoch,loss_d,loss_g,d_real_mean,d_fake_mean,wall_seconds\n";
    }

    const std::size_t n = reals.size();
    const std::size_t bsz = static_cast<std::size_t>(config.batch_size);
    const std::size_t steps = (n + bsz - 1) / bsz;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (int e = 1; e <= config.epochs; ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        state.epoch = e;
        Rng shuffle_rng(derive_seed(config.seed, 4, static_cast<std::uint64_t>(e)));
        shuffle_rng.shuffle(order);
        Rng flip_rng(derive_seed(config.seed, 5, static_cast<std::uint64_t>(e)));

        double sum_ld = 0, sum_lg = 0, sum_dr = 0, sum_df = 0;
        std::size_t seen = 0;
        for (std::size_t si = 0; si < steps; ++si) {
            const std::size_t lo = si * bsz;
            const std::size_t hi = std::min(n, lo + bsz);
            const std::size_t b = hi - lo;
            nn::Tensor<float> batch({b, 1, static_cast<std::size_t>(s), static_cast<std::size_t>(s)});
            for (std::size_t i = 0; i < b; ++i) {
                const data::Patch& src = reals[order[lo + i]];
                if (config.flip_augment_real) {
                    data::Patch flipped = data::flip_augment(src, flip_rng);
                    std::copy(flipped.pixels.pix.begin(), flipped.pixels.pix.end(),
                              batch.ptr() + i * s * s);
                } else {
                    std::copy(src.pixels.pix.begin(), src.pixels.pix.end(),
                              batch.ptr() + i * s * s);
                }
            }
            state.step = static_cast<int>(si + 1);
            StepStats st = train_step(state, batch);
            sum_ld += st.loss_d * double(b);
            sum_lg += st.loss_g * double(b);
            sum_dr += st.d_real_mean * double(b);
            sum_df += st.d_fake_mean * double(b);
            seen += b;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        TrainLogRow row{e,
                        sum_ld / double(seen),
                        sum_lg / double(seen),
                        sum_dr / double(seen),
                        sum_df / double(seen),
                        wall};
        out.log.push_back(row);
        if (log_os) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.3f\n", row.epoch,
                          row.loss_d, row.loss_g, row.d_real_mean, row.d_fake_mean,
                          row.wall_seconds);
            log_os << buf << std::flush;
        }
        if (!out_dir.empty() && config.sample_grid_every > 0 &&
            e % config.sample_grid_every == 0) {
            write_sample_grid(state.g, state.gspec, state.config.latent,
                              derive_seed(config.seed, 6, static_cast<std::uint64_t>(e)),
                              out_dir / ("samples_epoch" + std::to_string(e) + ".pgm"));
        }
    }

    models::TrainingMeta meta;
    meta.epoch = config.epochs;
    meta.seed = config.seed;
    char num[64];
    std::snprintf(num, sizeof(num), "%.6f", out.log.back().loss_d);
    meta.extra["final_loss_d"] = num;
    std::snprintf(num, sizeof(num), "%.6f", out.log.back().loss_g);
    meta.extra["final_loss_g"] = num;
    meta.extra["steps_per_epoch"] = std::to_string(steps);
    meta.extra["total_steps"] = std::to_string(steps * static_cast<std::size_t>(config.epochs));
    models::TrainingMeta gmeta = meta;
    gmeta.extra["latent_minmax"] = config.latent.normalize_to_unit_range ? "1" : "0";
    out.generator = models::make_checkpoint(state.g, state.gspec, gmeta);
    out.discriminator =
        models::make_checkpoint(state.d, state.dspec, models::ModelKind::Discriminator, meta);
    if (!out_dir.empty()) {
        models::save_checkpoint(out.generator, out_dir / "generator.ckpt");
        models::save_checkpoint(out.discriminator, out_dir / "discriminator.ckpt");
    }
    return out;
}

} // namespace ganaug::gan
