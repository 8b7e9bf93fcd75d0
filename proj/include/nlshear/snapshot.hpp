// snapshot.hpp
//
// Field snapshots: <stem>.raw holds nx*ny little-endian float64 samples in
// row-major order; <stem>.json carries nx, ny, lx, ly, time and field name.

#ifndef NLSHEAR_SNAPSHOT_HPP
#define NLSHEAR_SNAPSHOT_HPP

#include "nlshear/spectral_field.hpp"

#include <filesystem>
#include <string>

namespace nlshear {

struct SnapshotMeta {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double time = 0.0;
    std::string field;
};

void write_snapshot(const std::filesystem::path& stem, const SpectralField& f, double time, const std::string& name);

/// Accepts the stem or either file of the pair.
SpectralField read_snapshot(const std::filesystem::path& path, SnapshotMeta* meta = nullptr);

} // namespace nlshear

#endif
