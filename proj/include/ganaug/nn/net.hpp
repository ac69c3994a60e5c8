#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ganaug/errors.hpp"
#include "ganaug/nn/layers.hpp"

namespace ganaug::nn {

// Sequential container with a named parameter/buffer registry.
template <class T>
class Net {
public:
    Net() = default;
    Net(Net&&) noexcept = default;
    Net& operator=(Net&&) noexcept = default;

    void add(std::string name, std::unique_ptr<Layer<T>> layer) {
        names_.push_back(std::move(name));
        layers_.push_back(std::move(layer));
    }

    Tensor<T> forward(const Tensor<T>& x) {
        Tensor<T> h = x;
        for (auto& l : layers_) h = l->forward(h, training_);
        return h;
    }

    // Backpropagates grad_out through all layers. Returns the input gradient
    // when want_input_grad; param grads accumulate unless disabled.
    Tensor<T> backward(const Tensor<T>& grad_out, bool accumulate_param_grads = true,
                       bool want_input_grad = false) {
        Tensor<T> g = grad_out;
        for (std::size_t i = layers_.size(); i-- > 0;) {
            const bool need_input = want_input_grad || i > 0;
            g = layers_[i]->backward(g, need_input, accumulate_param_grads);
        }
        return g;
    }

    std::vector<ParamRef<T>> params() {
        std::vector<ParamRef<T>> ps;
        std::vector<BufferRef<T>> bs;
        for (std::size_t i = 0; i < layers_.size(); ++i) layers_[i]->collect(names_[i], ps, bs);
        return ps;
    }

    std::vector<BufferRef<T>> buffers() {
        std::vector<ParamRef<T>> ps;
        std::vector<BufferRef<T>> bs;
        for (std::size_t i = 0; i < layers_.size(); ++i) layers_[i]->collect(names_[i], ps, bs);
        return bs;
    }

    // Parameters and buffers together: everything a checkpoint must carry.
    std::vector<std::pair<std::string, Tensor<T>*>> state() {
        std::vector<std::pair<std::string, Tensor<T>*>> out;
        for (auto& p : params()) out.emplace_back(p.name, p.value);
        for (auto& b : buffers()) out.emplace_back(b.name, b.value);
        return out;
    }

    void zero_grad() {
        for (auto& p : params()) p.grad->fill(T(0));
    }

    void init(std::uint64_t seed) {
        Rng rng(seed);
        for (auto& l : layers_) l->init_params(rng);
    }

    void set_training(bool on) { training_ = on; }
    bool training() const { return training_; }
    std::size_t n_layers() const { return layers_.size(); }

    std::map<std::string, Tensor<T>> snapshot() {
        std::map<std::string, Tensor<T>> s;
        for (auto& [name, t] : state()) s[name] = *t;
        return s;
    }

    void restore(const std::map<std::string, Tensor<T>>& s) {
        for (auto& [name, t] : state()) {
            auto it = s.find(name);
            if (it == s.end()) throw InvalidInput("snapshot missing tensor " + name);
            *t = it->second;
        }
    }

private:
    std::vector<std::string> names_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
    bool training_ = true;
};

} // namespace ganaug::nn
