#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace ganaug::nn {

// Dense row-major tensor. Kept deliberately minimal: shape bookkeeping plus
// contiguous storage; all arithmetic lives in the layers.
template <class T>
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)), data(numel_of(shape), T(0)) {}
    Tensor(std::vector<std::size_t> s, T fill) : shape(std::move(s)), data(numel_of(shape), fill) {}

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
    }

    std::size_t numel() const { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape[i]; }
    std::size_t rank() const { return shape.size(); }

    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    Tensor<T> reshaped(std::vector<std::size_t> s) const {
        Tensor<T> out;
        out.shape = std::move(s);
        out.data = data;
        return out;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape == b.shape && a.data == b.data;
    }
    friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }
};

} // namespace ganaug::nn
