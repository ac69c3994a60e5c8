#include "ganaug/data/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "ganaug/errors.hpp"

namespace ganaug::data {

namespace {

// Percentile with linear interpolation between order statistics.
double percentile(const std::vector<float>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return static_cast<double>(sorted[lo]) * (1.0 - frac) + static_cast<double>(sorted[hi]) * frac;
}

} // namespace

Image histogram_normalize(const Image& raw) {
    if (raw.pix.empty()) throw InvalidInput("histogram_normalize: empty image");

    std::vector<float> sorted = raw.pix;
    std::sort(sorted.begin(), sorted.end());
    const double p1 = percentile(sorted, 0.01);
    const double p99 = percentile(sorted, 0.99);

    Image out(raw.h, raw.w);
    if (p99 <= p1) {
        return out; // constant (or near-constant) input carries no information
    }
    const double scale = 1.0 / (p99 - p1);
    for (std::size_t i = 0; i < raw.pix.size(); ++i) {
        const double v = std::clamp(static_cast<double>(raw.pix[i]), p1, p99);
        out.pix[i] = static_cast<float>((v - p1) * scale);
    }
    return out;
}

std::vector<float> normalize_to_range(const std::vector<float>& values, float lo, float hi) {
    if (lo >= hi) throw InvalidInput("normalize_to_range: lo must be < hi");
    if (values.empty()) throw InvalidInput("normalize_to_range: empty input");

    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<float> out(values.size());
    if (mx <= mn) {
        std::fill(out.begin(), out.end(), (lo + hi) / 2.0f);
        return out;
    }
    const double scale = (static_cast<double>(hi) - lo) / (mx - mn);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = static_cast<float>(lo + (values[i] - mn) * scale);
    }
    return out;
}

Image normalize_to_range(const Image& values, float lo, float hi) {
    Image out(values.h, values.w);
    out.pix = normalize_to_range(values.pix, lo, hi);
    return out;
}

} // namespace ganaug::data
