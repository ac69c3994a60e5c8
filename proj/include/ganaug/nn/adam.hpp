#pragma once

#include <cmath>
#include <vector>

#include "ganaug/errors.hpp"
#include "ganaug/nn/layers.hpp"

namespace ganaug::nn {

template <class T>
class Adam {
public:
    Adam() = default;
    Adam(double lr, double beta1, double beta2, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(std::vector<ParamRef<T>>& params) {
        if (m_.empty()) {
            m_.resize(params.size());
            v_.resize(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) {
                m_[i].assign(params[i].value->numel(), 0.0);
                v_[i].assign(params[i].value->numel(), 0.0);
            }
        }
        if (m_.size() != params.size()) throw InvalidInput("optimizer bound to different params");
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto& w = params[i].value->data;
            auto& g = params[i].grad->data;
            auto& m = m_[i];
            auto& v = v_[i];
            for (std::size_t j = 0; j < w.size(); ++j) {
                const double gj = g[j];
                m[j] = beta1_ * m[j] + (1.0 - beta1_) * gj;
                v[j] = beta2_ * v[j] + (1.0 - beta2_) * gj * gj;
                const double mhat = m[j] / bc1;
                const double vhat = v[j] / bc2;
                w[j] = static_cast<T>(w[j] - lr_ * mhat / (std::sqrt(vhat) + eps_));
            }
        }
    }

    double learning_rate() const { return lr_; }
    long steps_taken() const { return t_; }

private:
    double lr_ = 2e-4, beta1_ = 0.5, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

} // namespace ganaug::nn
