#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ganaug/errors.hpp"
#include "ganaug/nn/gemm.hpp"
#include "ganaug/nn/tensor.hpp"
#include "ganaug/rng.hpp"

namespace ganaug::nn {

template <class T>
struct ParamRef {
    std::string name;
    Tensor<T>* value = nullptr;
    Tensor<T>* grad = nullptr;
};

template <class T>
struct BufferRef {
    std::string name;
    Tensor<T>* value = nullptr;
};

// A layer owns its parameters and the activation cache needed for one
// backward pass. forward(train=true) must precede backward.
template <class T>
class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor<T> forward(const Tensor<T>& x, bool train) = 0;
    // grad_out is dL/d(output). Returns dL/d(input) when want_input_grad.
    // accumulate_param_grads=false skips weight/bias gradient work entirely,
    // for passes that only need gradients flowing through to the input.
    virtual Tensor<T> backward(const Tensor<T>& grad_out, bool want_input_grad,
                               bool accumulate_param_grads) = 0;
    virtual void collect(const std::string& prefix, std::vector<ParamRef<T>>& params,
                         std::vector<BufferRef<T>>& buffers) {
        (void)prefix;
        (void)params;
        (void)buffers;
    }
    virtual void init_params(Rng& rng) { (void)rng; }
};

// ---- im2col / col2im ------------------------------------------------------

// x: [C,H,W] -> col: [C*k*k, OH*OW] for a convolution with square kernel k,
// stride s, symmetric zero padding p.
template <class T>
void im2col(const T* x, std::size_t C, std::size_t H, std::size_t W, std::size_t k,
            std::size_t s, long p, std::size_t OH, std::size_t OW, T* col) {
    for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t ki = 0; ki < k; ++ki) {
            for (std::size_t kj = 0; kj < k; ++kj) {
                T* row = col + (((c * k + ki) * k + kj) * OH * OW);
                for (std::size_t oh = 0; oh < OH; ++oh) {
                    long ih = static_cast<long>(oh * s) - p + static_cast<long>(ki);
                    if (ih < 0 || ih >= static_cast<long>(H)) {
                        for (std::size_t ow = 0; ow < OW; ++ow) row[oh * OW + ow] = T(0);
                        continue;
                    }
                    const T* src = x + (c * H + static_cast<std::size_t>(ih)) * W;
                    for (std::size_t ow = 0; ow < OW; ++ow) {
                        long iw = static_cast<long>(ow * s) - p + static_cast<long>(kj);
                        row[oh * OW + ow] =
                            (iw < 0 || iw >= static_cast<long>(W)) ? T(0) : src[iw];
                    }
                }
            }
        }
    }
}

// Scatter-add inverse of im2col. out ([C,H,W]) must be pre-zeroed.
template <class T>
void col2im(const T* col, std::size_t C, std::size_t H, std::size_t W, std::size_t k,
            std::size_t s, long p, std::size_t OH, std::size_t OW, T* out) {
    for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t ki = 0; ki < k; ++ki) {
            for (std::size_t kj = 0; kj < k; ++kj) {
                const T* row = col + (((c * k + ki) * k + kj) * OH * OW);
                for (std::size_t oh = 0; oh < OH; ++oh) {
                    long ih = static_cast<long>(oh * s) - p + static_cast<long>(ki);
                    if (ih < 0 || ih >= static_cast<long>(H)) continue;
                    T* dst = out + (c * H + static_cast<std::size_t>(ih)) * W;
                    for (std::size_t ow = 0; ow < OW; ++ow) {
                        long iw = static_cast<long>(ow * s) - p + static_cast<long>(kj);
                        if (iw < 0 || iw >= static_cast<long>(W)) continue;
                        dst[iw] += row[oh * OW + ow];
                    }
                }
            }
        }
    }
}

// ---- Conv2d ---------------------------------------------------------------

template <class T>
class Conv2d final : public Layer<T> {
public:
    Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
           long pad, bool bias)
        : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), s_(stride), p_(pad), has_bias_(bias),
          w_({out_ch, in_ch, kernel, kernel}), gw_({out_ch, in_ch, kernel, kernel}),
          b_({bias ? out_ch : 0}), gb_({bias ? out_ch : 0}) {}

    Tensor<T> forward(const Tensor<T>& x, bool train) override {
        (void)train;
        check_input(x);
        const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
        const std::size_t OH = out_side(H), OW = out_side(W);
        x_cache_ = x;
        Tensor<T> y({N, out_ch_, OH, OW});
        std::vector<T> col(in_ch_ * k_ * k_ * OH * OW);
        for (std::size_t n = 0; n < N; ++n) {
            im2col(x.ptr() + n * in_ch_ * H * W, in_ch_, H, W, k_, s_, p_, OH, OW, col.data());
            gemm(false, false, out_ch_, OH * OW, in_ch_ * k_ * k_, T(1), w_.ptr(), col.data(),
                 T(0), y.ptr() + n * out_ch_ * OH * OW);
            if (has_bias_) {
                for (std::size_t c = 0; c < out_ch_; ++c) {
                    T* dst = y.ptr() + (n * out_ch_ + c) * OH * OW;
                    for (std::size_t i = 0; i < OH * OW; ++i) dst[i] += b_.data[c];
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad,
                       bool accumulate_param_grads) override {
        const std::size_t N = x_cache_.dim(0), H = x_cache_.dim(2), W = x_cache_.dim(3);
        const std::size_t OH = gy.dim(2), OW = gy.dim(3);
        Tensor<T> gx;
        if (want_input_grad) gx = Tensor<T>({N, in_ch_, H, W});
        std::vector<T> col(in_ch_ * k_ * k_ * OH * OW);
        for (std::size_t n = 0; n < N; ++n) {
            const T* gyn = gy.ptr() + n * out_ch_ * OH * OW;
            if (accumulate_param_grads) {
                im2col(x_cache_.ptr() + n * in_ch_ * H * W, in_ch_, H, W, k_, s_, p_, OH, OW,
                       col.data());
                gemm(false, true, out_ch_, in_ch_ * k_ * k_, OH * OW, T(1), gyn, col.data(),
                     T(1), gw_.ptr());
                if (has_bias_) {
                    for (std::size_t c = 0; c < out_ch_; ++c) {
                        double acc = 0;
                        const T* src = gyn + c * OH * OW;
                        for (std::size_t i = 0; i < OH * OW; ++i) acc += src[i];
                        gb_.data[c] += static_cast<T>(acc);
                    }
                }
            }
            if (want_input_grad) {
                gemm(true, false, in_ch_ * k_ * k_, OH * OW, out_ch_, T(1), w_.ptr(), gyn,
                     T(0), col.data());
                col2im(col.data(), in_ch_, H, W, k_, s_, p_, OH, OW,
                       gx.ptr() + n * in_ch_ * H * W);
            }
        }
        return gx;
    }

    void collect(const std::string& prefix, std::vector<ParamRef<T>>& params,
                 std::vector<BufferRef<T>>& buffers) override {
        (void)buffers;
        params.push_back({prefix + ".weight", &w_, &gw_});
        if (has_bias_) params.push_back({prefix + ".bias", &b_, &gb_});
    }

    void init_params(Rng& rng) override {
        for (auto& v : w_.data) v = static_cast<T>(rng.normal(0.0, 0.02));
        b_.fill(T(0));
    }

    std::size_t out_side(std::size_t n) const {
        return static_cast<std::size_t>(
            (static_cast<long>(n) + 2 * p_ - static_cast<long>(k_)) / static_cast<long>(s_) + 1);
    }

private:
    void check_input(const Tensor<T>& x) const {
        if (x.rank() != 4 || x.dim(1) != in_ch_)
            throw InvalidInput("conv input must be [N," + std::to_string(in_ch_) + ",H,W]");
    }

    std::size_t in_ch_, out_ch_, k_, s_;
    long p_;
    bool has_bias_;
    Tensor<T> w_, gw_, b_, gb_;
    Tensor<T> x_cache_;
};

// ---- ConvTranspose2d ------------------------------------------------------

// Weight layout [Cin, Cout, k, k]. Output side = (H-1)*s - 2p + k.
template <class T>
class ConvTranspose2d final : public Layer<T> {
public:
    ConvTranspose2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                    std::size_t stride, long pad, bool bias)
        : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), s_(stride), p_(pad), has_bias_(bias),
          w_({in_ch, out_ch, kernel, kernel}), gw_({in_ch, out_ch, kernel, kernel}),
          b_({bias ? out_ch : 0}), gb_({bias ? out_ch : 0}) {}

    Tensor<T> forward(const Tensor<T>& x, bool train) override {
        (void)train;
        if (x.rank() != 4 || x.dim(1) != in_ch_)
            throw InvalidInput("tconv input must be [N," + std::to_string(in_ch_) + ",H,W]");
        const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
        const std::size_t OH = out_side(H), OW = out_side(W);
        x_cache_ = x;
        Tensor<T> y({N, out_ch_, OH, OW});
        std::vector<T> col(out_ch_ * k_ * k_ * H * W);
        for (std::size_t n = 0; n < N; ++n) {
            gemm(true, false, out_ch_ * k_ * k_, H * W, in_ch_, T(1), w_.ptr(),
                 x.ptr() + n * in_ch_ * H * W, T(0), col.data());
            col2im(col.data(), out_ch_, OH, OW, k_, s_, p_, H, W, y.ptr() + n * out_ch_ * OH * OW);
            if (has_bias_) {
                for (std::size_t c = 0; c < out_ch_; ++c) {
                    T* dst = y.ptr() + (n * out_ch_ + c) * OH * OW;
                    for (std::size_t i = 0; i < OH * OW; ++i) dst[i] += b_.data[c];
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad,
                       bool accumulate_param_grads) override {
        const std::size_t N = x_cache_.dim(0), H = x_cache_.dim(2), W = x_cache_.dim(3);
        const std::size_t OH = gy.dim(2), OW = gy.dim(3);
        Tensor<T> gx;
        if (want_input_grad) gx = Tensor<T>({N, in_ch_, H, W});
        std::vector<T> col(out_ch_ * k_ * k_ * H * W);
        for (std::size_t n = 0; n < N; ++n) {
            const T* gyn = gy.ptr() + n * out_ch_ * OH * OW;
            im2col(gyn, out_ch_, OH, OW, k_, s_, p_, H, W, col.data());
            if (accumulate_param_grads) {
                gemm(false, true, in_ch_, out_ch_ * k_ * k_, H * W, T(1),
                     x_cache_.ptr() + n * in_ch_ * H * W, col.data(), T(1), gw_.ptr());
                if (has_bias_) {
                    for (std::size_t c = 0; c < out_ch_; ++c) {
                        double acc = 0;
                        const T* src = gyn + c * OH * OW;
                        for (std::size_t i = 0; i < OH * OW; ++i) acc += src[i];
                        gb_.data[c] += static_cast<T>(acc);
                    }
                }
            }
            if (want_input_grad) {
                gemm(false, false, in_ch_, H * W, out_ch_ * k_ * k_, T(1), w_.ptr(), col.data(),
                     T(0), gx.ptr() + n * in_ch_ * H * W);
            }
        }
        return gx;
    }

    void collect(const std::string& prefix, std::vector<ParamRef<T>>& params,
                 std::vector<BufferRef<T>>& buffers) override {
        (void)buffers;
        params.push_back({prefix + ".weight", &w_, &gw_});
        if (has_bias_) params.push_back({prefix + ".bias", &b_, &gb_});
    }

    void init_params(Rng& rng) override {
        for (auto& v : w_.data) v = static_cast<T>(rng.normal(0.0, 0.02));
        b_.fill(T(0));
    }

    std::size_t out_side(std::size_t n) const {
        return (n - 1) * s_ - 2 * static_cast<std::size_t>(p_) + k_;
    }

private:
    std::size_t in_ch_, out_ch_, k_, s_;
    long p_;
    bool has_bias_;
    Tensor<T> w_, gw_, b_, gb_;
    Tensor<T> x_cache_;
};

// ---- BatchNorm2d ----------------------------------------------------------

template <class T>
class BatchNorm2d final : public Layer<T> {
public:
    explicit BatchNorm2d(std::size_t channels, double momentum = 0.1, double eps = 1e-5)
        : c_(channels), momentum_(momentum), eps_(eps), gamma_({channels}), ggamma_({channels}),
          beta_({channels}), gbeta_({channels}), run_mean_({channels}), run_var_({channels}) {
        gamma_.fill(T(1));
        run_var_.fill(T(1));
    }

    Tensor<T> forward(const Tensor<T>& x, bool train) override {
        if (x.rank() != 4 || x.dim(1) != c_)
            throw InvalidInput("batchnorm input must be [N," + std::to_string(c_) + ",H,W]");
        const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
        const std::size_t plane = H * W;
        const std::size_t m = N * plane;
        trained_forward_ = train;
        Tensor<T> y(x.shape);
        if (train) {
            xhat_ = Tensor<T>(x.shape);
            inv_.assign(c_, 0.0);
            for (std::size_t c = 0; c < c_; ++c) {
                double sum = 0, sumsq = 0;
                for (std::size_t n = 0; n < N; ++n) {
                    const T* src = x.ptr() + (n * c_ + c) * plane;
                    for (std::size_t i = 0; i < plane; ++i) {
                        sum += src[i];
                        sumsq += double(src[i]) * double(src[i]);
                    }
                }
                const double mu = sum / double(m);
                const double var = std::max(0.0, sumsq / double(m) - mu * mu);
                const double inv = 1.0 / std::sqrt(var + eps_);
                inv_[c] = inv;
                for (std::size_t n = 0; n < N; ++n) {
                    const T* src = x.ptr() + (n * c_ + c) * plane;
                    T* xh = xhat_.ptr() + (n * c_ + c) * plane;
                    T* dst = y.ptr() + (n * c_ + c) * plane;
                    for (std::size_t i = 0; i < plane; ++i) {
                        xh[i] = static_cast<T>((src[i] - mu) * inv);
                        dst[i] = static_cast<T>(double(gamma_.data[c]) * xh[i] +
                                                double(beta_.data[c]));
                    }
                }
                const double unbiased = m > 1 ? var * double(m) / double(m - 1) : var;
                run_mean_.data[c] =
                    static_cast<T>((1.0 - momentum_) * run_mean_.data[c] + momentum_ * mu);
                run_var_.data[c] =
                    static_cast<T>((1.0 - momentum_) * run_var_.data[c] + momentum_ * unbiased);
            }
        } else {
            for (std::size_t c = 0; c < c_; ++c) {
                const double inv = 1.0 / std::sqrt(double(run_var_.data[c]) + eps_);
                const double mu = run_mean_.data[c];
                const double g = gamma_.data[c], b = beta_.data[c];
                for (std::size_t n = 0; n < N; ++n) {
                    const T* src = x.ptr() + (n * c_ + c) * plane;
                    T* dst = y.ptr() + (n * c_ + c) * plane;
                    for (std::size_t i = 0; i < plane; ++i)
                        dst[i] = static_cast<T>(g * (src[i] - mu) * inv + b);
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad,
                       bool accumulate_param_grads) override {
        if (!trained_forward_)
            throw InvalidInput("batchnorm backward requires a training-mode forward");
        const std::size_t N = gy.dim(0), H = gy.dim(2), W = gy.dim(3);
        const std::size_t plane = H * W;
        const std::size_t m = N * plane;
        Tensor<T> gx;
        if (want_input_grad) gx = Tensor<T>(gy.shape);
        for (std::size_t c = 0; c < c_; ++c) {
            double sum_g = 0, sum_gx = 0;
            for (std::size_t n = 0; n < N; ++n) {
                const T* g = gy.ptr() + (n * c_ + c) * plane;
                const T* xh = xhat_.ptr() + (n * c_ + c) * plane;
                for (std::size_t i = 0; i < plane; ++i) {
                    sum_g += g[i];
                    sum_gx += double(g[i]) * double(xh[i]);
                }
            }
            if (accumulate_param_grads) {
                ggamma_.data[c] += static_cast<T>(sum_gx);
                gbeta_.data[c] += static_cast<T>(sum_g);
            }
            if (want_input_grad) {
                const double scale = double(gamma_.data[c]) * inv_[c];
                const double mean_g = sum_g / double(m);
                const double mean_gx = sum_gx / double(m);
                for (std::size_t n = 0; n < N; ++n) {
                    const T* g = gy.ptr() + (n * c_ + c) * plane;
                    const T* xh = xhat_.ptr() + (n * c_ + c) * plane;
                    T* dst = gx.ptr() + (n * c_ + c) * plane;
                    for (std::size_t i = 0; i < plane; ++i)
                        dst[i] = static_cast<T>(scale *
                                                (double(g[i]) - mean_g - double(xh[i]) * mean_gx));
                }
            }
        }
        return gx;
    }

    void collect(const std::string& prefix, std::vector<ParamRef<T>>& params,
                 std::vector<BufferRef<T>>& buffers) override {
        params.push_back({prefix + ".gamma", &gamma_, &ggamma_});
        params.push_back({prefix + ".beta", &beta_, &gbeta_});
        buffers.push_back({prefix + ".running_mean", &run_mean_});
        buffers.push_back({prefix + ".running_var", &run_var_});
    }

    void init_params(Rng& rng) override {
        for (auto& v : gamma_.data) v = static_cast<T>(rng.normal(1.0, 0.02));
        beta_.fill(T(0));
        run_mean_.fill(T(0));
        run_var_.fill(T(1));
    }

private:
    std::size_t c_;
    double momentum_, eps_;
    Tensor<T> gamma_, ggamma_, beta_, gbeta_, run_mean_, run_var_;
    Tensor<T> xhat_;
    std::vector<double> inv_;
    bool trained_forward_ = false;
};

// ---- Linear ---------------------------------------------------------------

template <class T>
class Linear final : public Layer<T> {
public:
    Linear(std::size_t in_features, std::size_t out_features)
        : in_(in_features), out_(out_features), w_({out_features, in_features}),
          gw_({out_features, in_features}), b_({out_features}), gb_({out_features}) {}

    Tensor<T> forward(const Tensor<T>& x, bool train) override {
        (void)train;
        if (x.rank() != 2 || x.dim(1) != in_)
            throw InvalidInput("linear input must be [N," + std::to_string(in_) + "]");
        const std::size_t N = x.dim(0);
        x_cache_ = x;
        Tensor<T> y({N, out_});
        gemm(false, true, N, out_, in_, T(1), x.ptr(), w_.ptr(), T(0), y.ptr());
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t o = 0; o < out_; ++o) y.data[n * out_ + o] += b_.data[o];
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad,
                       bool accumulate_param_grads) override {
        const std::size_t N = x_cache_.dim(0);
        if (accumulate_param_grads) {
            gemm(true, false, out_, in_, N, T(1), gy.ptr(), x_cache_.ptr(), T(1), gw_.ptr());
            for (std::size_t o = 0; o < out_; ++o) {
                double acc = 0;
                for (std::size_t n = 0; n < N; ++n) acc += gy.data[n * out_ + o];
                gb_.data[o] += static_cast<T>(acc);
            }
        }
        Tensor<T> gx;
        if (want_input_grad) {
            gx = Tensor<T>({N, in_});
            gemm(false, false, N, in_, out_, T(1), gy.ptr(), w_.ptr(), T(0), gx.ptr());
        }
        return gx;
    }

    void collect(const std::string& prefix, std::vector<ParamRef<T>>& params,
                 std::vector<BufferRef<T>>& buffers) override {
        (void)buffers;
        params.push_back({prefix + ".weight", &w_, &gw_});
        params.push_back({prefix + ".bias", &b_, &gb_});
    }

    void init_params(Rng& rng) override {
        for (auto& v : w_.data) v = static_cast<T>(rng.normal(0.0, 0.02));
        b_.fill(T(0));
    }

private:
    std::size_t in_, out_;
    Tensor<T> w_, gw_, b_, gb_;
    Tensor<T> x_cache_;
};

// ---- Activations ----------------------------------------------------------

template <class T>
class ReLU final : public Layer<T> {
public:
    Tensor<T> forward(const Tensor<T>& x, bool) override {
        y_ = x;
        for (auto& v : y_.data)
            if (v < T(0)) v = T(0);
        return y_;
    }
    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad, bool) override {
        if (!want_input_grad) return {};
        Tensor<T> gx(gy.shape);
        for (std::size_t i = 0; i < gy.numel(); ++i)
            gx.data[i] = y_.data[i] > T(0) ? gy.data[i] : T(0);
        return gx;
    }

private:
    Tensor<T> y_;
};

template <class T>
class LeakyReLU final : public Layer<T> {
public:
    explicit LeakyReLU(double slope = 0.2) : slope_(slope) {}
    Tensor<T> forward(const Tensor<T>& x, bool) override {
        y_ = x;
        for (auto& v : y_.data)
            if (v < T(0)) v = static_cast<T>(slope_ * v);
        return y_;
    }
    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad, bool) override {
        if (!want_input_grad) return {};
        Tensor<T> gx(gy.shape);
        for (std::size_t i = 0; i < gy.numel(); ++i)
            gx.data[i] =
                y_.data[i] > T(0) ? gy.data[i] : static_cast<T>(slope_ * gy.data[i]);
        return gx;
    }

private:
    double slope_;
    Tensor<T> y_;
};

template <class T>
class Tanh final : public Layer<T> {
public:
    Tensor<T> forward(const Tensor<T>& x, bool) override {
        y_ = Tensor<T>(x.shape);
        for (std::size_t i = 0; i < x.numel(); ++i)
            y_.data[i] = static_cast<T>(std::tanh(double(x.data[i])));
        return y_;
    }
    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad, bool) override {
        if (!want_input_grad) return {};
        Tensor<T> gx(gy.shape);
        for (std::size_t i = 0; i < gy.numel(); ++i)
            gx.data[i] = static_cast<T>(gy.data[i] * (T(1) - y_.data[i] * y_.data[i]));
        return gx;
    }

private:
    Tensor<T> y_;
};

// Fixed reshape of the non-batch dimensions; batch dim is preserved.
template <class T>
class Reshape final : public Layer<T> {
public:
    explicit Reshape(std::vector<std::size_t> trailing) : trailing_(std::move(trailing)) {}
    Tensor<T> forward(const Tensor<T>& x, bool) override {
        in_shape_ = x.shape;
        std::vector<std::size_t> s{x.dim(0)};
        s.insert(s.end(), trailing_.begin(), trailing_.end());
        if (Tensor<T>::numel_of(s) != x.numel()) throw InvalidInput("reshape element mismatch");
        return x.reshaped(std::move(s));
    }
    Tensor<T> backward(const Tensor<T>& gy, bool want_input_grad, bool) override {
        if (!want_input_grad) return {};
        return gy.reshaped(in_shape_);
    }

private:
    std::vector<std::size_t> trailing_;
    std::vector<std::size_t> in_shape_;
};

} // namespace ganaug::nn
