#pragma once

#include <vector>

namespace ganaug::gan {

// Probability-domain adversarial losses. All probabilities must lie strictly
// inside (0,1); the real targets may be smoothed (e.g. 0.9), fakes target 0.
//
//   L_D = -mean[s*log p_r + (1-s)*log(1-p_r)] - mean[log(1-p_f)]
//   L_G = -mean[log p_f]  (non-saturating)

double discriminator_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                          double real_label);
double generator_loss(const std::vector<double>& d_fake);

// Analytic gradients w.r.t. the probabilities, for verification.
void discriminator_loss_grad(const std::vector<double>& d_real, const std::vector<double>& d_fake,
                             double real_label, std::vector<double>& grad_real,
                             std::vector<double>& grad_fake);
std::vector<double> generator_loss_grad(const std::vector<double>& d_fake);

// Numerically stable logit-domain form used by the optimizers:
//   bce(l, t) = softplus(l) - t*l,  d/dl = sigmoid(l) - t
double softplus(double x);
double bce_with_logits(double logit, double target);
double bce_with_logits_mean(const std::vector<float>& logits, double target);

} // namespace ganaug::gan
