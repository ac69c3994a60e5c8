#pragma once

#include <filesystem>

#include "ganaug/data/patch.hpp"

namespace ganaug::data {

// Binary PGM (P5). Writing quantizes intensity i to round(i*255) at maxval
// 255; reading accepts maxval up to 65535 and rescales to [0,1].
void write_pgm(const std::filesystem::path& path, const Image& img);
Image read_pgm(const std::filesystem::path& path);

// Patch directory layout: <root>/mass/<id>.pgm, <root>/normal/<id>.pgm plus
// a manifest.csv with header id,label,source,path.
void save_pool(const PatchPool& pool, const std::filesystem::path& root);
PatchPool load_pool(const std::filesystem::path& root);

} // namespace ganaug::data
