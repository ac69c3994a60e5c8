#include "ganaug/gan/losses.hpp"

#include <cmath>

#include "ganaug/errors.hpp"

namespace ganaug::gan {

namespace {

void check_probs(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw DomainError(std::string(what) + " batch is empty");
    for (double v : p)
        if (!(v > 0.0 && v < 1.0))
            throw DomainError(std::string(what) + " probabilities must lie in (0,1)");
}

} // namespace

double discriminator_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                          double real_label) {
    check_probs(d_real, "real");
    check_probs(d_fake, "fake");
    if (!(real_label > 0.0 && real_label <= 1.0))
        throw DomainError("real_label must lie in (0,1]");
    double real_term = 0;
    for (double p : d_real)
        real_term += real_label * std::log(p) + (1.0 - real_label) * std::log(1.0 - p);
    double fake_term = 0;
    for (double q : d_fake) fake_term += std::log(1.0 - q);
    return -real_term / double(d_real.size()) - fake_term / double(d_fake.size());
}

double generator_loss(const std::vector<double>& d_fake) {
    check_probs(d_fake, "fake");
    double acc = 0;
    for (double q : d_fake) acc += std::log(q);
    return -acc / double(d_fake.size());
}

void discriminator_loss_grad(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                             double real_label, std::vector<double>& grad_real,
                             std::vector<double>& grad_fake) {
    check_probs(d_real, "real");
    check_probs(d_fake, "fake");
    grad_real.resize(d_real.size());
    grad_fake.resize(d_fake.size());
    const double nr = double(d_real.size()), nf = double(d_fake.size());
    for (std::size_t i = 0; i < d_real.size(); ++i) {
        const double p = d_real[i];
        grad_real[i] = -(real_label / p - (1.0 - real_label) / (1.0 - p)) / nr;
    }
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        grad_fake[i] = 1.0 / (1.0 - d_fake[i]) / nf;
}

std::vector<double> generator_loss_grad(const std::vector<double>& d_fake) {
    check_probs(d_fake, "fake");
    std::vector<double> g(d_fake.size());
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        g[i] = -1.0 / d_fake[i] / double(d_fake.size());
    return g;
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double bce_with_logits(double logit, double target) { return softplus(logit) - target * logit; }

double bce_with_logits_mean(const std::vector<float>& logits, double target) {
    if (logits.empty()) throw DomainError("logit batch is empty");
    double acc = 0;
    for (float l : logits) acc += bce_with_logits(double(l), target);
    return acc / double(logits.size());
}

} // namespace ganaug::gan
