#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ganaug/models/networks.hpp"
#include "ganaug/models/specs.hpp"
#include "ganaug/nn/net.hpp"
#include "ganaug/nn/tensor.hpp"

namespace ganaug::models {

inline constexpr char kCheckpointMagic[8] = {'G', 'A', 'N', 'A', 'U', 'G', '0', '1'};

enum class ModelKind { Generator, Discriminator, Classifier };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct TrainingMeta {
    std::int64_t epoch = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> extra; // free-form, e.g. final losses
};

struct Checkpoint {
    ModelKind kind = ModelKind::Generator;
    GeneratorSpec generator_spec;       // valid when kind == Generator
    DiscriminatorSpec discriminator_spec; // valid otherwise
    TrainingMeta meta;
    std::vector<std::pair<std::string, nn::Tensor<float>>> tensors; // sorted by name

    int image_size() const {
        return kind == ModelKind::Generator ? generator_spec.image_size
                                            : discriminator_spec.image_size;
    }
};

Checkpoint make_checkpoint(nn::Net<float>& net, const GeneratorSpec& spec,
                           const TrainingMeta& meta);
Checkpoint make_checkpoint(nn::Net<float>& net, const DiscriminatorSpec& spec, ModelKind kind,
                           const TrainingMeta& meta);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Rebuilds the architecture from the stored spec and installs every tensor.
nn::Net<float> restore_net(const Checkpoint& ckpt);

} // namespace ganaug::models
