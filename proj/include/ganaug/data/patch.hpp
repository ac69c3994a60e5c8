#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ganaug::data {

enum class Label { Mass, Normal };
enum class Source { Real, Synthetic };

inline const char* to_string(Label l) { return l == Label::Mass ? "mass" : "normal"; }
inline const char* to_string(Source s) { return s == Source::Real ? "real" : "synthetic"; }

// Dense row-major grayscale image, intensities nominally in [0,1].
struct Image {
    int h = 0;
    int w = 0;
    std::vector<float> pix;

    Image() = default;
    Image(int h_, int w_, float fill = 0.0f) : h(h_), w(w_), pix(static_cast<std::size_t>(h_) * w_, fill) {}

    float& at(int r, int c) { return pix[static_cast<std::size_t>(r) * w + c]; }
    float at(int r, int c) const { return pix[static_cast<std::size_t>(r) * w + c]; }
    std::size_t size() const { return pix.size(); }
};

// One S x S training sample.
struct Patch {
    std::string id;
    Label label = Label::Normal;
    Source source = Source::Real;
    Image pixels;

    int side() const { return pixels.h; }
};

// Ordered collection of patches with per-class bookkeeping.
class PatchPool {
public:
    PatchPool() = default;

    void add(Patch p) {
        counts_[p.label]++;
        patches_.push_back(std::move(p));
    }

    const std::vector<Patch>& patches() const { return patches_; }
    std::size_t size() const { return patches_.size(); }
    bool empty() const { return patches_.empty(); }
    const Patch& operator[](std::size_t i) const { return patches_[i]; }

    std::size_t count(Label l) const {
        auto it = counts_.find(l);
        return it == counts_.end() ? 0 : it->second;
    }

    const std::map<Label, std::size_t>& class_counts() const { return counts_; }

private:
    std::vector<Patch> patches_;
    std::map<Label, std::size_t> counts_;
};

} // namespace ganaug::data
