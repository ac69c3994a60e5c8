#include "ganaug/data/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ganaug/errors.hpp"

namespace fs = std::filesystem;

namespace ganaug::data {

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(in.get()));
            return tok;
        }
    }
    throw IoError("pgm: unexpected end of header");
}

std::string csv_field(const std::string& line, std::size_t& pos) {
    const auto comma = line.find(',', pos);
    std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? line.size() : comma + 1;
    return field;
}

} // namespace

void write_pgm(const fs::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("pgm: cannot open for writing: " + path.string());
    out << "P5\n" << img.w << " " << img.h << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.w));
    for (int r = 0; r < img.h; ++r) {
        for (int c = 0; c < img.w; ++c) {
            const float v = std::clamp(img.at(r, c), 0.0f, 1.0f);
            row[static_cast<std::size_t>(c)] = static_cast<unsigned char>(std::lround(v * 255.0f));
        }
        out.write(reinterpret_cast<const char*>(row.data()), img.w);
    }
    if (!out) throw IoError("pgm: write failed: " + path.string());
}

Image read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm: cannot open: " + path.string());
    if (next_token(in) != "P5") throw IoError("pgm: not a binary PGM: " + path.string());
    const int w = std::stoi(next_token(in));
    const int h = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw IoError("pgm: bad header: " + path.string());
    in.get(); // single whitespace after maxval

    Image img(h, w);
    const std::size_t n = static_cast<std::size_t>(h) * w;
    if (maxval < 256) {
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (!in) throw IoError("pgm: truncated pixel data: " + path.string());
        for (std::size_t i = 0; i < n; ++i) img.pix[i] = static_cast<float>(buf[i]) / static_cast<float>(maxval);
    } else {
        std::vector<unsigned char> buf(n * 2); // big-endian 16-bit
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 2));
        if (!in) throw IoError("pgm: truncated pixel data: " + path.string());
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
            img.pix[i] = static_cast<float>(v) / static_cast<float>(maxval);
        }
    }
    return img;
}

void save_pool(const PatchPool& pool, const fs::path& root) {
    fs::create_directories(root / "mass");
    fs::create_directories(root / "normal");
    std::ofstream manifest(root / "manifest.csv");
    if (!manifest) throw IoError("save_pool: cannot write manifest in " + root.string());
    manifest << "id,label,source,path\n";
    for (const Patch& p : pool.patches()) {
        const std::string rel = std::string(to_string(p.label)) + "/" + p.id + ".pgm";
        write_pgm(root / rel, p.pixels);
        manifest << p.id << "," << to_string(p.label) << "," << to_string(p.source) << "," << rel
                 << "\n";
    }
}

PatchPool load_pool(const fs::path& root) {
    PatchPool pool;
    const fs::path manifest_path = root / "manifest.csv";
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        std::string line;
        std::getline(in, line); // header
        if (line != "id,label,source,path")
            throw IoError("load_pool: unexpected manifest header in " + manifest_path.string());
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::size_t pos = 0;
            Patch p;
            p.id = csv_field(line, pos);
            const std::string label = csv_field(line, pos);
            const std::string source = csv_field(line, pos);
            const std::string rel = csv_field(line, pos);
            if (label == "mass")
                p.label = Label::Mass;
            else if (label == "normal")
                p.label = Label::Normal;
            else
                throw IoError("load_pool: bad label '" + label + "' in manifest");
            if (source == "real")
                p.source = Source::Real;
            else if (source == "synthetic")
                p.source = Source::Synthetic;
            else
                throw IoError("load_pool: bad source '" + source + "' in manifest");
            p.pixels = read_pgm(root / rel);
            pool.add(std::move(p));
        }
        return pool;
    }

    // No manifest: scan the two class directories in sorted filename order.
    for (const auto& [dir, label] : {std::pair{fs::path("mass"), Label::Mass},
                                     std::pair{fs::path("normal"), Label::Normal}}) {
        const fs::path full = root / dir;
        if (!fs::exists(full)) continue;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(full))
            if (entry.path().extension() == ".pgm") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            Patch p;
            p.id = f.stem().string();
            p.label = label;
            p.source = Source::Real;
            p.pixels = read_pgm(f);
            pool.add(std::move(p));
        }
    }
    if (pool.empty()) throw IoError("load_pool: no patches found under " + root.string());
    return pool;
}

} // namespace ganaug::data
