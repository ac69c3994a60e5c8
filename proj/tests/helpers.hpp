#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "ganaug/data/patch.hpp"
#include "ganaug/nn/tensor.hpp"
#include "ganaug/rng.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

inline ganaug::data::Image random_image(int h, int w, ganaug::Rng& rng, float lo = 0.0f,
                                        float hi = 1.0f) {
    ganaug::data::Image img(h, w);
    for (auto& v : img.pix) v = static_cast<float>(rng.uniform(lo, hi));
    return img;
}

inline ganaug::data::Patch make_patch(const std::string& id, ganaug::data::Label label, int side,
                                      ganaug::Rng& rng) {
    ganaug::data::Patch p;
    p.id = id;
    p.label = label;
    p.source = ganaug::data::Source::Real;
    p.pixels = random_image(side, side, rng);
    return p;
}

inline ganaug::data::Patch make_patch(const std::string& id, ganaug::data::Label label, int side,
                                      std::uint64_t seed) {
    ganaug::Rng rng(seed);
    return make_patch(id, label, side, rng);
}

inline ganaug::data::PatchPool make_pool(std::size_t n_mass, std::size_t n_normal, int side,
                                         std::uint64_t seed) {
    ganaug::Rng rng(seed);
    ganaug::data::PatchPool pool;
    for (std::size_t i = 0; i < n_mass; ++i)
        pool.add(make_patch("m" + std::to_string(i), ganaug::data::Label::Mass, side, rng));
    for (std::size_t i = 0; i < n_normal; ++i)
        pool.add(make_patch("n" + std::to_string(i), ganaug::data::Label::Normal, side, rng));
    return pool;
}

// Direct-definition convolution, stride 2, zero padding. x [C,H,W] row-major.
inline std::vector<double> naive_conv2d(const std::vector<double>& x, int C, int H, int W,
                                        const std::vector<double>& w, int Cout, int k, int pad,
                                        const std::vector<double>& bias, int& OH, int& OW) {
    const int s = 2;
    OH = (H + 2 * pad - k) / s + 1;
    OW = (W + 2 * pad - k) / s + 1;
    std::vector<double> y(static_cast<std::size_t>(Cout) * OH * OW, 0.0);
    for (int co = 0; co < Cout; ++co)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow) {
                double acc = bias.empty() ? 0.0 : bias[co];
                for (int ci = 0; ci < C; ++ci)
                    for (int ki = 0; ki < k; ++ki)
                        for (int kj = 0; kj < k; ++kj) {
                            const int ih = oh * s - pad + ki;
                            const int iw = ow * s - pad + kj;
                            if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                            acc += x[(static_cast<std::size_t>(ci) * H + ih) * W + iw] *
                                   w[((static_cast<std::size_t>(co) * C + ci) * k + ki) * k + kj];
                        }
                y[(static_cast<std::size_t>(co) * OH + oh) * OW + ow] = acc;
            }
    return y;
}

// Direct-definition transposed convolution, stride 2: y[co, ih*s-p+ki, ...]
// accumulates x[ci,ih,iw] * w[ci,co,ki,kj]. Weight layout [Cin,Cout,k,k].
inline std::vector<double> naive_tconv2d(const std::vector<double>& x, int C, int H, int W,
                                         const std::vector<double>& w, int Cout, int k, int pad,
                                         const std::vector<double>& bias, int& OH, int& OW) {
    const int s = 2;
    OH = (H - 1) * s - 2 * pad + k;
    OW = (W - 1) * s - 2 * pad + k;
    std::vector<double> y(static_cast<std::size_t>(Cout) * OH * OW, 0.0);
    for (int co = 0; co < Cout; ++co)
        if (!bias.empty())
            for (int i = 0; i < OH * OW; ++i) y[static_cast<std::size_t>(co) * OH * OW + i] = bias[co];
    for (int ci = 0; ci < C; ++ci)
        for (int ih = 0; ih < H; ++ih)
            for (int iw = 0; iw < W; ++iw) {
                const double v = x[(static_cast<std::size_t>(ci) * H + ih) * W + iw];
                for (int co = 0; co < Cout; ++co)
                    for (int ki = 0; ki < k; ++ki)
                        for (int kj = 0; kj < k; ++kj) {
                            const int oh = ih * s - pad + ki;
                            const int ow = iw * s - pad + kj;
                            if (oh < 0 || oh >= OH || ow < 0 || ow >= OW) continue;
                            y[(static_cast<std::size_t>(co) * OH + oh) * OW + ow] +=
                                v * w[((static_cast<std::size_t>(ci) * Cout + co) * k + ki) * k + kj];
                        }
            }
    return y;
}

// Brute-force 2-D DFT checkerboard fraction: |X[S/2,S/2]|^2 over total
// non-DC spectral energy.
inline double dft_checkerboard(const ganaug::data::Image& img) {
    const int s = img.h;
    double total = 0.0, dc = 0.0, nyq = 0.0;
    for (int u = 0; u < s; ++u)
        for (int v = 0; v < s; ++v) {
            std::complex<double> acc(0, 0);
            for (int r = 0; r < s; ++r)
                for (int c = 0; c < s; ++c) {
                    const double ang = -2.0 * M_PI * (double(u * r) / s + double(v * c) / s);
                    acc += double(img.at(r, c)) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            const double e = std::norm(acc);
            total += e;
            if (u == 0 && v == 0) dc = e;
            if (u == s / 2 && v == s / 2) nyq = e;
        }
    const double denom = total - dc;
    return denom <= 1e-12 ? 0.0 : nyq / denom;
}

inline bool nearly(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool file_bytes_equal(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::FILE* fa = std::fopen(a.string().c_str(), "rb");
    std::FILE* fb = std::fopen(b.string().c_str(), "rb");
    if (!fa || !fb) {
        if (fa) std::fclose(fa);
        if (fb) std::fclose(fb);
        return false;
    }
    bool equal = true;
    for (;;) {
        unsigned char ba[4096], bb[4096];
        const std::size_t na = std::fread(ba, 1, sizeof(ba), fa);
        const std::size_t nb = std::fread(bb, 1, sizeof(bb), fb);
        if (na != nb || std::memcmp(ba, bb, na) != 0) {
            equal = false;
            break;
        }
        if (na == 0) break;
    }
    std::fclose(fa);
    std::fclose(fb);
    return equal;
}

inline std::vector<char> read_bytes(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

inline void write_bytes(const std::filesystem::path& p, const std::vector<char>& bytes) {
    std::ofstream os(p, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace testutil
