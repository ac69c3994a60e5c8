#include "ganaug/models/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ganaug/errors.hpp"

namespace ganaug::models {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Generator: return "generator";
        case ModelKind::Discriminator: return "discriminator";
        case ModelKind::Classifier: return "classifier";
    }
    return "generator";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "generator") return ModelKind::Generator;
    if (s == "discriminator") return ModelKind::Discriminator;
    if (s == "classifier") return ModelKind::Classifier;
    throw CheckpointCorrupted("unknown model kind: " + s);
}

namespace {

std::vector<std::pair<std::string, nn::Tensor<float>>> sorted_state(nn::Net<float>& net) {
    std::vector<std::pair<std::string, nn::Tensor<float>>> out;
    for (auto& [name, t] : net.state()) out.emplace_back(name, *t);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::string build_header(const Checkpoint& c) {
    std::ostringstream h;
    h << "kind=" << to_string(c.kind) << "\n";
    if (c.kind == ModelKind::Generator) {
        const auto& s = c.generator_spec;
        h << "image_size=" << s.image_size << "\n";
        h << "base_channels=" << s.resolved_base() << "\n";
        h << "kernel_size=" << s.kernel_size << "\n";
        h << "latent_dim=" << s.latent_dim << "\n";
    } else {
        const auto& s = c.discriminator_spec;
        h << "image_size=" << s.image_size << "\n";
        h << "base_channels=" << s.resolved_base() << "\n";
        h << "kernel_size=" << s.kernel_size << "\n";
    }
    h << "epoch=" << c.meta.epoch << "\n";
    h << "seed=" << c.meta.seed << "\n";
    h << "tensor_count=" << c.tensors.size() << "\n";
    for (const auto& [k, v] : c.meta.extra) h << "meta." << k << "=" << v << "\n";
    return h.str();
}

template <class T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool read_raw(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<bool>(is);
}

long parse_long(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw CheckpointCorrupted("bad integer for header key " + key);
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw CheckpointCorrupted("bad integer for header key " + key);
    }
}

} // namespace

Checkpoint make_checkpoint(nn::Net<float>& net, const GeneratorSpec& spec,
                           const TrainingMeta& meta) {
    Checkpoint c;
    c.kind = ModelKind::Generator;
    c.generator_spec = spec;
    c.generator_spec.base_channels = spec.resolved_base();
    c.meta = meta;
    c.tensors = sorted_state(net);
    return c;
}

Checkpoint make_checkpoint(nn::Net<float>& net, const DiscriminatorSpec& spec, ModelKind kind,
                           const TrainingMeta& meta) {
    if (kind == ModelKind::Generator)
        throw InvalidInput("generator checkpoints carry a GeneratorSpec");
    Checkpoint c;
    c.kind = kind;
    c.discriminator_spec = spec;
    c.discriminator_spec.base_channels = spec.resolved_base();
    c.meta = meta;
    c.tensors = sorted_state(net);
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    const std::string header = build_header(ckpt);
    write_raw(os, static_cast<std::uint64_t>(header.size()));
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& [name, t] : ckpt.tensors) {
        write_raw(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_raw(os, static_cast<std::uint32_t>(t.rank()));
        for (std::size_t d : t.shape) write_raw(os, static_cast<std::uint64_t>(d));
        os.write(reinterpret_cast<const char*>(t.ptr()),
                 static_cast<std::streamsize>(t.numel() * sizeof(float)));
    }
    if (!os) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    char magic[8];
    if (!is.read(magic, 8)) throw CheckpointCorrupted("file shorter than magic");
    if (std::memcmp(magic, "GANAUG", 6) != 0)
        throw CheckpointCorrupted("bad magic, not a model checkpoint");
    if (std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw CheckpointVersionMismatch("unsupported checkpoint version " +
                                        std::string(magic + 6, 2));
    std::uint64_t header_len = 0;
    if (!read_raw(is, header_len) || header_len > (1u << 20))
        throw CheckpointCorrupted("bad header length");
    std::string header(header_len, '\0');
    if (!is.read(header.data(), static_cast<std::streamsize>(header_len)))
        throw CheckpointCorrupted("truncated header");

    Checkpoint c;
    bool saw_kind = false;
    std::uint64_t tensor_count = 0;
    bool saw_count = false;
    int image_size = 0, base_channels = 0, kernel_size = 0, latent_dim = 0;
    std::istringstream hs(header);
    std::string line;
    while (std::getline(hs, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw CheckpointCorrupted("malformed header line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "kind") {
            c.kind = model_kind_from_string(val);
            saw_kind = true;
        } else if (key == "image_size") {
            image_size = static_cast<int>(parse_long(val, key));
        } else if (key == "base_channels") {
            base_channels = static_cast<int>(parse_long(val, key));
        } else if (key == "kernel_size") {
            kernel_size = static_cast<int>(parse_long(val, key));
        } else if (key == "latent_dim") {
            latent_dim = static_cast<int>(parse_long(val, key));
        } else if (key == "epoch") {
            c.meta.epoch = parse_long(val, key);
        } else if (key == "seed") {
            c.meta.seed = parse_u64(val, key);
        } else if (key == "tensor_count") {
            tensor_count = parse_u64(val, key);
            saw_count = true;
        } else if (key.rfind("meta.", 0) == 0) {
            c.meta.extra[key.substr(5)] = val;
        } else {
            throw CheckpointCorrupted("unknown header key: " + key);
        }
    }
    if (!saw_kind || !saw_count || image_size == 0 || base_channels == 0 || kernel_size == 0)
        throw CheckpointCorrupted("header missing required keys");
    if (c.kind == ModelKind::Generator) {
        if (latent_dim == 0) throw CheckpointCorrupted("generator header missing latent_dim");
        c.generator_spec = GeneratorSpec{latent_dim, image_size, base_channels, kernel_size};
    } else {
        c.discriminator_spec = DiscriminatorSpec{image_size, base_channels, kernel_size};
    }

    c.tensors.reserve(tensor_count);
    for (std::uint64_t i = 0; i < tensor_count; ++i) {
        std::uint32_t name_len = 0;
        if (!read_raw(is, name_len) || name_len == 0 || name_len > 4096)
            throw CheckpointCorrupted("bad tensor name length");
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len)) throw CheckpointCorrupted("truncated tensor name");
        std::uint32_t rank = 0;
        if (!read_raw(is, rank) || rank > 8) throw CheckpointCorrupted("bad tensor rank");
        std::vector<std::size_t> shape(rank);
        std::size_t numel = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            std::uint64_t dim = 0;
            if (!read_raw(is, dim) || dim == 0 || dim > (1u << 28))
                throw CheckpointCorrupted("bad tensor dimension");
            shape[d] = static_cast<std::size_t>(dim);
            numel *= shape[d];
        }
        nn::Tensor<float> t(shape);
        if (!is.read(reinterpret_cast<char*>(t.ptr()),
                     static_cast<std::streamsize>(numel * sizeof(float))))
            throw CheckpointCorrupted("truncated tensor payload for " + name);
        c.tensors.emplace_back(std::move(name), std::move(t));
    }
    char extra;
    if (is.read(&extra, 1)) throw CheckpointCorrupted("trailing bytes after last tensor");
    return c;
}

nn::Net<float> restore_net(const Checkpoint& ckpt) {
    nn::Net<float> net = ckpt.kind == ModelKind::Generator
                             ? build_generator(ckpt.generator_spec, 0)
                             : build_discriminator(ckpt.discriminator_spec, 0);
    std::map<std::string, const nn::Tensor<float>*> by_name;
    for (const auto& [name, t] : ckpt.tensors) {
        if (!by_name.emplace(name, &t).second)
            throw CheckpointCorrupted("duplicate tensor " + name);
    }
    std::size_t used = 0;
    for (auto& [name, dst] : net.state()) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw CheckpointMissingTensor("missing tensor " + name);
        if (it->second->shape != dst->shape)
            throw CheckpointCorrupted("shape mismatch for tensor " + name);
        *dst = *it->second;
        ++used;
    }
    if (used != by_name.size()) throw CheckpointCorrupted("checkpoint carries unknown tensors");
    return net;
}

} // namespace ganaug::models
