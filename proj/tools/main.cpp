#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganaug/data/extract.hpp"
#include "ganaug/data/io.hpp"
#include "ganaug/data/phantom.hpp"
#include "ganaug/data/split.hpp"
#include "ganaug/errors.hpp"
#include "ganaug/eval/matrix.hpp"
#include "ganaug/eval/report.hpp"
#include "ganaug/eval/strategy.hpp"
#include "ganaug/gan/synthesis.hpp"
#include "ganaug/gan/training.hpp"
#include "ganaug/models/checkpoint.hpp"
#include "ganaug/rng.hpp"

namespace fs = std::filesystem;
using namespace ganaug;

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Timestamps live only here so every other artifact stays diffable.
class RunLog {
public:
    explicit RunLog(const fs::path& out_dir) {
        fs::create_directories(out_dir);
        os_.open(out_dir / "run.log", std::ios::app);
        if (!os_) throw IoError("cannot open run.log under " + out_dir.string());
    }
    void line(const std::string& msg) {
        os_ << "[" << utc_now() << "] " << msg << "\n";
        os_.flush();
    }

private:
    std::ofstream os_;
};

void write_resolved_config(CLI::App* cmd, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream os(out_dir / "resolved_config.toml");
    if (!os) throw IoError("cannot write resolved_config.toml under " + out_dir.string());
    // Section-per-subcommand, so the file reloads through --config as-is.
    os << "[" << cmd->get_name() << "]\n" << cmd->config_to_str(true, false);
}

data::PatchPool filter_label(const data::PatchPool& pool, data::Label want) {
    data::PatchPool out;
    for (const auto& p : pool.patches())
        if (p.label == want) out.add(p);
    return out;
}

// Config files are read by the root app (sections route keys to the
// subcommands), so each subcommand lets unmatched flags fall through to it.
void add_config_option(CLI::App* cmd) { cmd->fallthrough(); }

std::array<double, 3> to_fractions(const std::vector<double>& v) {
    if (v.size() != 3)
        throw InvalidInput("--split-fractions needs exactly three values: train,val,test");
    return {v[0], v[1], v[2]};
}

// ---- phantom --------------------------------------------------------------

struct PhantomOpts {
    std::string out;
    data::PhantomConfig cfg;
};

void run_phantom(const PhantomOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    log.line("phantom: generating " + std::to_string(o.cfg.n_positive) + " mass + " +
             std::to_string(o.cfg.n_negative) + " normal patches at S=" +
             std::to_string(o.cfg.image_size));
    auto pool = data::generate_phantom_dataset(o.cfg);
    data::save_pool(pool, o.out);
    write_resolved_config(cmd, o.out);
    log.line("phantom: wrote " + std::to_string(pool.size()) + " patches to " + o.out);
}

void setup_phantom(CLI::App& app, std::shared_ptr<PhantomOpts> o) {
    auto* cmd = app.add_subcommand("phantom", "Generate a procedural phantom patch dataset");
    cmd->add_option("--out", o->out, "Output pool directory")->required();
    cmd->add_option("--n-pos", o->cfg.n_positive, "Number of mass patches")->required();
    cmd->add_option("--n-neg", o->cfg.n_negative, "Number of normal patches")->required();
    cmd->add_option("--size", o->cfg.image_size, "Patch side in pixels")
        ->capture_default_str();
    cmd->add_option("--seed", o->cfg.seed, "Master seed")->capture_default_str();
    cmd->add_option("--radius-min", o->cfg.lesion_radius_min, "Smallest lesion radius")
        ->capture_default_str();
    cmd->add_option("--radius-max", o->cfg.lesion_radius_max, "Largest lesion radius")
        ->capture_default_str();
    cmd->add_option("--contrast-min", o->cfg.lesion_contrast_min, "Smallest lesion contrast")
        ->capture_default_str();
    cmd->add_option("--contrast-max", o->cfg.lesion_contrast_max, "Largest lesion contrast")
        ->capture_default_str();
    cmd->add_option("--corr-len", o->cfg.background_correlation_length,
                    "Background correlation length in pixels")
        ->capture_default_str();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_phantom(*o, cmd); });
}

// ---- extract ---------------------------------------------------------------

struct ExtractOpts {
    std::string image, boxes, mask, out;
    int patch_size = 32;
    int n_negative = 0;
    std::uint64_t seed = 1337;
};

std::vector<data::Box> parse_boxes(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open boxes file " + path.string());
    std::vector<data::Box> boxes;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first && line == "x,y,w,h") {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ss(line);
        data::Box b;
        char c1, c2, c3;
        if (!(ss >> b.x >> c1 >> b.y >> c2 >> b.w >> c3 >> b.h) || c1 != ',' || c2 != ',' ||
            c3 != ',')
            throw InvalidInput("malformed box line: " + line);
        boxes.push_back(b);
    }
    return boxes;
}

void run_extract(const ExtractOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    data::AnnotatedImage ann;
    ann.pixels = data::read_pgm(o.image);
    ann.mass_boxes = parse_boxes(o.boxes);
    if (!o.mask.empty()) {
        data::Image m = data::read_pgm(o.mask);
        if (m.h != ann.pixels.h || m.w != ann.pixels.w)
            throw InvalidInput("mask dimensions do not match the image");
        ann.background_mask.resize(m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            ann.background_mask[i] = m.pix[i] > 0.5f ? 1 : 0;
    }
    log.line("extract: " + std::to_string(ann.mass_boxes.size()) + " boxes from " + o.image);
    auto pool = data::extract_patches(ann, o.patch_size, o.n_negative, o.seed);
    data::save_pool(pool, o.out);
    write_resolved_config(cmd, o.out);
    log.line("extract: wrote " + std::to_string(pool.size()) + " patches to " + o.out);
}

void setup_extract(CLI::App& app, std::shared_ptr<ExtractOpts> o) {
    auto* cmd = app.add_subcommand(
        "extract", "Cut mass and normal patches out of an annotated image");
    cmd->add_option("--image", o->image, "Source image (PGM)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--boxes", o->boxes, "CSV of mass boxes: x,y,w,h per line")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--mask", o->mask, "Optional tissue mask (PGM, >0.5 = tissue)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Output pool directory")->required();
    cmd->add_option("--patch-size", o->patch_size, "Patch side in pixels")
        ->capture_default_str();
    cmd->add_option("--n-neg", o->n_negative, "Number of normal patches to sample")->required();
    cmd->add_option("--seed", o->seed, "Sampling seed")->capture_default_str();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_extract(*o, cmd); });
}

// ---- train-gan ---------------------------------------------------------------

struct TrainGanOpts {
    std::string data, out;
    gan::GanTrainConfig cfg;
    double lr = 2e-4;
    double lr_d = -1, lr_g = -1;
    bool no_flip = false;
    bool no_latent_minmax = false;
    bool no_split = false;
    std::uint64_t master_seed = 1337;
    std::vector<double> fractions{0.60, 0.066, 0.334};
};

void run_train_gan(TrainGanOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    o.cfg.learning_rate_d = o.lr_d >= 0 ? o.lr_d : o.lr;
    o.cfg.learning_rate_g = o.lr_g >= 0 ? o.lr_g : o.lr;
    o.cfg.flip_augment_real = !o.no_flip;
    o.cfg.latent.normalize_to_unit_range = !o.no_latent_minmax;

    auto pool = data::load_pool(o.data);
    auto masses = filter_label(pool, data::Label::Mass);
    data::PatchPool reals;
    if (o.no_split) {
        reals = masses;
        log.line("train-gan: using all " + std::to_string(reals.size()) + " masses");
    } else {
        auto split = data::split_dataset(masses, to_fractions(o.fractions),
                                         derive_seed(o.master_seed, 0xA11CE, 1));
        reals = split.train;
        log.line("train-gan: using the " + std::to_string(reals.size()) +
                 "-mass training split of " + std::to_string(masses.size()));
    }
    write_resolved_config(cmd, o.out);
    log.line("train-gan: " + std::to_string(o.cfg.epochs) + " epochs, batch " +
             std::to_string(o.cfg.batch_size) + ", seed " + std::to_string(o.cfg.seed));
    auto res = gan::train_gan(o.cfg, reals, o.out);
    log.line("train-gan: final loss_d=" + res.generator.meta.extra.at("final_loss_d") +
             " loss_g=" + res.generator.meta.extra.at("final_loss_g"));
    log.line("train-gan: checkpoints written to " + o.out);
}

void setup_train_gan(CLI::App& app, std::shared_ptr<TrainGanOpts> o) {
    auto* cmd = app.add_subcommand("train-gan",
                                   "Train the generative model on the mass training split");
    cmd->add_option("--data", o->data, "Input pool directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->add_option("--epochs", o->cfg.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--batch-size", o->cfg.batch_size, "Batch size")->capture_default_str();
    cmd->add_option("--lr", o->lr, "Learning rate for both players")->capture_default_str();
    cmd->add_option("--lr-d", o->lr_d, "Discriminator learning rate (overrides --lr)");
    cmd->add_option("--lr-g", o->lr_g, "Generator learning rate (overrides --lr)");
    cmd->add_option("--beta1", o->cfg.adam_beta1, "Adam beta1")->capture_default_str();
    cmd->add_option("--beta2", o->cfg.adam_beta2, "Adam beta2")->capture_default_str();
    cmd->add_option("--real-label", o->cfg.real_label, "Smoothed target for real patches")
        ->capture_default_str();
    cmd->add_flag("--no-flip", o->no_flip, "Disable flip augmentation of real batches");
    cmd->add_option("--latent-dim", o->cfg.latent.dim, "Latent dimension")
        ->capture_default_str();
    cmd->add_flag("--no-latent-minmax", o->no_latent_minmax,
                  "Feed raw normal latents instead of min-max rescaled ones");
    cmd->add_option("--base-channels", o->cfg.base_channels,
                    "Widest layer channels (0 = default for the patch size)")
        ->capture_default_str();
    cmd->add_option("--g-kernel", o->cfg.generator_kernel, "Generator kernel size")
        ->capture_default_str();
    cmd->add_option("--d-kernel", o->cfg.discriminator_kernel, "Discriminator kernel size")
        ->capture_default_str();
    cmd->add_option("--sample-every", o->cfg.sample_grid_every,
                    "Write an 8x8 sample sheet every N epochs (0 = off)")
        ->capture_default_str();
    cmd->add_option("--seed", o->cfg.seed, "Training seed")->capture_default_str();
    cmd->add_flag("--no-split", o->no_split, "Train on every mass instead of the training split");
    cmd->add_option("--master-seed", o->master_seed,
                    "Split seed; keep equal to eval-matrix for a shared split")
        ->capture_default_str();
    cmd->add_option("--split-fractions", o->fractions, "train,val,test fractions")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_train_gan(*o, cmd); });
}

// ---- synth -------------------------------------------------------------------

struct SynthOpts {
    std::string ckpt, out;
    std::size_t n = 0;
    std::uint64_t seed = 1337;
};

void run_synth(const SynthOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    auto ckpt = models::load_checkpoint(o.ckpt);
    log.line("synth: drawing " + std::to_string(o.n) + " patches from " + o.ckpt);
    auto pool = gan::synthesize(ckpt, o.n, o.seed);
    data::save_pool(pool, o.out);
    write_resolved_config(cmd, o.out);
    log.line("synth: wrote " + std::to_string(pool.size()) + " patches to " + o.out);
}

void setup_synth(CLI::App& app, std::shared_ptr<SynthOpts> o) {
    auto* cmd = app.add_subcommand("synth", "Sample synthetic mass patches from a checkpoint");
    cmd->add_option("--ckpt", o->ckpt, "Generator checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--n", o->n, "Number of patches")->required();
    cmd->add_option("--seed", o->seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--out", o->out, "Output pool directory")->required();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_synth(*o, cmd); });
}

// ---- eval-matrix --------------------------------------------------------------

struct EvalMatrixOpts {
    std::string data, generator, out;
    eval::ExperimentMatrixConfig cfg;
    std::vector<std::string> strategies{"ORG", "AugORG", "GAN", "AugGAN"};
    std::vector<double> fractions{0.60, 0.066, 0.334};
};

void run_eval_matrix(EvalMatrixOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    o.cfg.split_fractions = to_fractions(o.fractions);
    o.cfg.strategies.clear();
    for (const auto& name : o.strategies)
        o.cfg.strategies.push_back(eval::strategy_from_string(name));

    auto pool = data::load_pool(o.data);
    auto positives = filter_label(pool, data::Label::Mass);
    auto negatives = filter_label(pool, data::Label::Normal);
    log.line("eval-matrix: " + std::to_string(positives.size()) + " masses, " +
             std::to_string(negatives.size()) + " normals from " + o.data);

    models::Checkpoint gen;
    const models::Checkpoint* gen_ptr = nullptr;
    if (!o.generator.empty()) {
        gen = models::load_checkpoint(o.generator);
        gen_ptr = &gen;
        log.line("eval-matrix: generator " + o.generator);
    }
    write_resolved_config(cmd, o.out);
    log.line("eval-matrix: " + std::to_string(o.cfg.strategies.size()) + " strategies x " +
             std::to_string(o.cfg.k_values.size()) + " sizes x " +
             std::to_string(o.cfg.repetitions) + " repetitions, jobs=" +
             std::to_string(o.cfg.jobs));
    auto records = eval::run_matrix(o.cfg, positives, negatives, gen_ptr);
    eval::emit_report(records, o.out);
    log.line("eval-matrix: wrote " + std::to_string(records.size()) + " records to " + o.out);
}

void setup_eval_matrix(CLI::App& app, std::shared_ptr<EvalMatrixOpts> o) {
    auto* cmd = app.add_subcommand(
        "eval-matrix", "Run the strategy x training-size x repetition experiment grid");
    cmd->add_option("--data", o->data, "Input pool directory (real patches, both classes)")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--generator", o->generator,
                    "Generator checkpoint (required for GAN strategies)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->add_option("--k", o->cfg.k_values, "Training-set sizes (positives per cell)")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--repetitions", o->cfg.repetitions, "Repetitions per cell")
        ->capture_default_str();
    cmd->add_option("--ratio", o->cfg.imbalance_ratio, "Normals per mass in training sets")
        ->capture_default_str();
    cmd->add_option("--multiplier", o->cfg.synthetic_multiplier,
                    "Synthetic positives per real positive for GAN strategies")
        ->capture_default_str();
    cmd->add_option("--strategies", o->strategies, "Subset of ORG,AugORG,GAN,AugGAN")
        ->delimiter(',')
        ->check(CLI::IsMember({"ORG", "AugORG", "GAN", "AugGAN"}))
        ->capture_default_str();
    cmd->add_option("--master-seed", o->cfg.master_seed, "Master seed for splits and cells")
        ->capture_default_str();
    cmd->add_option("--jobs", o->cfg.jobs, "Parallel cell workers")->capture_default_str();
    cmd->add_option("--split-fractions", o->fractions, "train,val,test fractions")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd->add_option("--cls-epochs", o->cfg.classifier.epochs, "Classifier epochs")
        ->capture_default_str();
    cmd->add_option("--cls-batch", o->cfg.classifier.batch_size, "Classifier batch size")
        ->capture_default_str();
    cmd->add_option("--cls-lr", o->cfg.classifier.learning_rate, "Classifier learning rate")
        ->capture_default_str();
    cmd->add_option("--cls-patience", o->cfg.classifier.patience,
                    "Early-stopping patience (0 = off)")
        ->capture_default_str();
    cmd->add_option("--cls-base", o->cfg.classifier.base_channels,
                    "Classifier base channels (0 = default)")
        ->capture_default_str();
    cmd->add_option("--cls-kernel", o->cfg.classifier.kernel_size, "Classifier kernel size")
        ->capture_default_str();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_eval_matrix(*o, cmd); });
}

// ---- report -------------------------------------------------------------------

struct ReportOpts {
    std::string results, out;
};

void run_report(const ReportOpts& o, CLI::App* cmd) {
    RunLog log(o.out);
    auto records = eval::read_results_csv(o.results);
    log.line("report: " + std::to_string(records.size()) + " records from " + o.results);
    eval::emit_report(records, o.out);
    write_resolved_config(cmd, o.out);
    log.line("report: artifacts written to " + o.out);
}

void setup_report(CLI::App& app, std::shared_ptr<ReportOpts> o) {
    auto* cmd = app.add_subcommand("report", "Regenerate summary and plot from a results CSV");
    cmd->add_option("--results", o->results, "Existing results.csv")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Output directory")->required();
    add_config_option(cmd);
    cmd->callback([o, cmd] { run_report(*o, cmd); });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic-minority augmentation toolkit for imbalanced patch classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ganaug 1.0.0");
    app.set_config("--config", "", "Read options from a TOML file (flags override it)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    auto phantom_opts = std::make_shared<PhantomOpts>();
    auto extract_opts = std::make_shared<ExtractOpts>();
    auto train_opts = std::make_shared<TrainGanOpts>();
    auto synth_opts = std::make_shared<SynthOpts>();
    auto matrix_opts = std::make_shared<EvalMatrixOpts>();
    auto report_opts = std::make_shared<ReportOpts>();
    setup_phantom(app, phantom_opts);
    setup_extract(app, extract_opts);
    setup_train_gan(app, train_opts);
    setup_synth(app, synth_opts);
    setup_eval_matrix(app, matrix_opts);
    setup_report(app, report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
