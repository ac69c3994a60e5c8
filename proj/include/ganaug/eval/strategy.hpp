#pragma once

#include <string>

#include "ganaug/errors.hpp"

namespace ganaug::eval {

// The four augmentation strategies under comparison.
enum class Strategy { Org, AugOrg, Gan, AugGan };

inline constexpr Strategy kAllStrategies[] = {Strategy::Org, Strategy::AugOrg, Strategy::Gan,
                                              Strategy::AugGan};

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Org: return "ORG";
        case Strategy::AugOrg: return "Aug ORG";
        case Strategy::Gan: return "GAN";
        case Strategy::AugGan: return "Aug GAN";
    }
    return "?";
}

inline Strategy strategy_from_string(const std::string& name) {
    if (name == "ORG") return Strategy::Org;
    if (name == "Aug ORG" || name == "AugORG") return Strategy::AugOrg;
    if (name == "GAN") return Strategy::Gan;
    if (name == "Aug GAN" || name == "AugGAN") return Strategy::AugGan;
    throw InvalidInput("unknown strategy: " + name);
}

inline bool uses_synthetic(Strategy s) { return s == Strategy::Gan || s == Strategy::AugGan; }
inline bool uses_flipping(Strategy s) { return s == Strategy::AugOrg || s == Strategy::AugGan; }

} // namespace ganaug::eval
