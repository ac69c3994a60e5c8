#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include <png.h>

#include "ganaug/errors.hpp"
#include "ganaug/eval/report.hpp"

namespace ganaug::eval {

namespace {

struct Color {
    unsigned char r, g, b;
};

constexpr Color kBlack{20, 20, 20};
constexpr Color kGray{200, 200, 200};
constexpr Color kWhite{255, 255, 255};

Color strategy_color(Strategy s) {
    switch (s) {
        case Strategy::Org: return {31, 119, 180};    // blue
        case Strategy::AugOrg: return {255, 127, 14}; // orange
        case Strategy::Gan: return {44, 160, 44};     // green
        case Strategy::AugGan: return {214, 39, 40};  // red
    }
    return kBlack;
}

// 5x7 glyphs, one byte per row, low 5 bits used.
const std::map<char, std::array<unsigned char, 7>>& font() {
    static const std::map<char, std::array<unsigned char, 7>> f = {
        {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
        {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
        {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
        {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
        {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
        {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
        {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
        {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
        {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
        {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
        {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
        {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
        {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
        {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
        {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
        {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
        {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
        {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
        {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
        {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
        {'g', {0x00, 0x00, 0x0F, 0x11, 0x0F, 0x01, 0x0E}},
        {'u', {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0D}},
        {'k', {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12}},
    };
    return f;
}

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), rgb_(static_cast<std::size_t>(w) * h * 3, 255) {}

    void set(int x, int y, Color c) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        const std::size_t i = (static_cast<std::size_t>(y) * w_ + x) * 3;
        rgb_[i] = c.r;
        rgb_[i + 1] = c.g;
        rgb_[i + 2] = c.b;
    }

    void hline(int x0, int x1, int y, Color c) {
        if (x0 > x1) std::swap(x0, x1);
        for (int x = x0; x <= x1; ++x) set(x, y, c);
    }

    void vline(int x, int y0, int y1, Color c) {
        if (y0 > y1) std::swap(y0, y1);
        for (int y = y0; y <= y1; ++y) set(x, y, c);
    }

    void line(int x0, int y0, int x1, int y1, Color c) {
        const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            set(x0, y0, c);
            set(x0, y0 + 1, c); // 2px weight so series lines stay visible
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void disc(int cx, int cy, int r, Color c) {
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                if (dx * dx + dy * dy <= r * r) set(cx + dx, cy + dy, c);
    }

    void text(int x, int y, const std::string& s, Color c, int scale = 1) {
        const auto& f = font();
        int cx = x;
        for (char ch : s) {
            auto it = f.find(ch);
            if (it != f.end()) {
                for (int row = 0; row < 7; ++row)
                    for (int col = 0; col < 5; ++col)
                        if (it->second[row] & (1 << (4 - col)))
                            for (int sy = 0; sy < scale; ++sy)
                                for (int sx = 0; sx < scale; ++sx)
                                    set(cx + col * scale + sx, y + row * scale + sy, c);
            }
            cx += 6 * scale;
        }
    }

    static int text_width(const std::string& s, int scale = 1) {
        return static_cast<int>(s.size()) * 6 * scale - scale;
    }

    int w() const { return w_; }
    int h() const { return h_; }
    const unsigned char* row(int y) const { return rgb_.data() + static_cast<std::size_t>(y) * w_ * 3; }

private:
    int w_, h_;
    std::vector<unsigned char> rgb_;
};

void save_png(const Canvas& canvas, const std::filesystem::path& path) {
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoError("cannot open for writing: " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw IoError("png encode failed: " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(canvas.w()),
                 static_cast<png_uint_32>(canvas.h()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < canvas.h(); ++y)
        png_write_row(png, const_cast<png_bytep>(canvas.row(y)));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

void write_f1_plot(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path) {
    const std::vector<SummaryRow> rows = summarize(records);

    std::vector<std::size_t> ks;
    for (const auto& r : rows) ks.push_back(r.k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<Strategy> present;
    for (Strategy s : kAllStrategies)
        for (const auto& r : rows)
            if (r.strategy == s) {
                present.push_back(s);
                break;
            }

    double y_lo = 1.0, y_hi = 0.0;
    for (const auto& r : rows) {
        y_lo = std::min(y_lo, r.f1_mean - r.f1_std);
        y_hi = std::max(y_hi, r.f1_mean + r.f1_std);
    }
    y_lo = std::max(0.0, std::floor(y_lo * 10.0) / 10.0 - 0.05);
    y_hi = std::min(1.0, std::ceil(y_hi * 10.0) / 10.0 + 0.05);
    if (y_hi - y_lo < 0.2) {
        y_lo = std::max(0.0, y_lo - 0.1);
        y_hi = std::min(1.0, y_hi + 0.1);
    }

    const int W = 960, H = 640;
    const int left = 80, right = W - 170, top = 40, bottom = H - 60;
    Canvas canvas(W, H);

    const double k_min = double(ks.front());
    const double k_max = ks.size() > 1 ? double(ks.back()) : double(ks.front()) + 1.0;
    auto x_of = [&](double k) {
        return left + static_cast<int>(std::lround((k - k_min) / (k_max - k_min) *
                                                   double(right - left)));
    };
    auto y_of = [&](double f1) {
        return bottom - static_cast<int>(std::lround((f1 - y_lo) / (y_hi - y_lo) *
                                                     double(bottom - top)));
    };

    for (double t = std::ceil(y_lo * 10.0) / 10.0; t <= y_hi + 1e-9; t += 0.1) {
        const int y = y_of(t);
        canvas.hline(left, right, y, kGray);
        canvas.text(left - 8 - Canvas::text_width(format_tick(t)), y - 3, format_tick(t),
                    kBlack);
    }
    canvas.vline(left, top, bottom, kBlack);
    canvas.hline(left, right, bottom, kBlack);
    for (std::size_t k : ks) {
        const int x = x_of(double(k));
        canvas.vline(x, bottom, bottom + 4, kBlack);
        const std::string label = std::to_string(k);
        canvas.text(x - Canvas::text_width(label) / 2, bottom + 8, label, kBlack);
    }
    canvas.text((left + right) / 2 - 3, H - 24, "k", kBlack, 2);
    canvas.text(12, top - 28, "F1", kBlack, 2);

    for (Strategy s : present) {
        const Color c = strategy_color(s);
        std::vector<std::pair<int, int>> pts;
        for (std::size_t k : ks)
            for (const auto& r : rows)
                if (r.strategy == s && r.k == k) {
                    const int x = x_of(double(k));
                    const int y = y_of(r.f1_mean);
                    const int yl = y_of(std::max(y_lo, r.f1_mean - r.f1_std));
                    const int yh = y_of(std::min(y_hi, r.f1_mean + r.f1_std));
                    canvas.vline(x, yh, yl, c);
                    canvas.hline(x - 4, x + 4, yh, c);
                    canvas.hline(x - 4, x + 4, yl, c);
                    pts.emplace_back(x, y);
                }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            canvas.line(pts[i].first, pts[i].second, pts[i + 1].first, pts[i + 1].second, c);
        for (const auto& [x, y] : pts) canvas.disc(x, y, 4, c);
    }

    int ly = top + 10;
    const int lx = right + 16;
    for (Strategy s : present) {
        const Color c = strategy_color(s);
        canvas.hline(lx, lx + 22, ly + 3, c);
        canvas.hline(lx, lx + 22, ly + 4, c);
        canvas.disc(lx + 11, ly + 3, 3, c);
        canvas.text(lx + 30, ly, to_string(s), kBlack);
        ly += 18;
    }

    save_png(canvas, path);
}

} // namespace ganaug::eval
