#include "ganaug/gan/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "ganaug/errors.hpp"

namespace ganaug::gan {

double checkerboard_score(const data::Image& img) {
    if (img.h != img.w || img.h <= 0) throw InvalidInput("checkerboard score needs a square image");
    if (img.h % 2 != 0) throw InvalidInput("checkerboard score needs an even side");
    const int s = img.h;
    double sum = 0, sumsq = 0, alt = 0;
    for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
            const double v = img.at(r, c);
            sum += v;
            sumsq += v * v;
            alt += ((r + c) & 1) ? -v : v;
        }
    }
    const double total = double(s) * double(s) * sumsq - sum * sum; // non-DC energy
    const double nyquist = alt * alt;
    if (total <= 1e-12) return 0.0;
    return nyquist / total;
}

double checkerboard_score(const data::Patch& patch) { return checkerboard_score(patch.pixels); }

MemorizationStats memorization_distance(const data::PatchPool& synthetic,
                                        const data::PatchPool& reals) {
    if (synthetic.empty() || reals.empty())
        throw InvalidInput("memorization distance needs non-empty pools");
    const int s = synthetic[0].side();
    for (const auto& p : synthetic.patches())
        if (p.side() != s || p.pixels.h != p.pixels.w)
            throw InvalidInput("synthetic patches must share one square side");
    for (const auto& p : reals.patches())
        if (p.side() != s || p.pixels.h != p.pixels.w)
            throw InvalidInput("real patches must match the synthetic side");

    MemorizationStats out;
    out.nearest.reserve(synthetic.size());
    const std::size_t npx = static_cast<std::size_t>(s) * s;
    double acc = 0;
    out.min_distance = std::numeric_limits<double>::infinity();
    for (const auto& syn : synthetic.patches()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& real : reals.patches()) {
            double d2 = 0;
            const float* a = syn.pixels.pix.data();
            const float* b = real.pixels.pix.data();
            for (std::size_t i = 0; i < npx; ++i) {
                const double diff = double(a[i]) - double(b[i]);
                d2 += diff * diff;
            }
            if (d2 < best) best = d2;
        }
        const double d = std::sqrt(best);
        out.nearest.push_back(d);
        acc += d;
        if (d < out.min_distance) out.min_distance = d;
    }
    out.mean_distance = acc / double(synthetic.size());
    return out;
}

} // namespace ganaug::gan
