#pragma once

#include <string>

#include "nlsplit/wavefunction.hpp"

namespace nlsplit {

/// Binary snapshot layout (all integers and doubles little-endian):
///   magic "NLSP" | version u32 | dims u32 | components u32 |
///   points u32 x 3 (unused axes 1) | lengths f64 x 3 |
///   C*N complex values as f64 pairs (re, im), row-major, component-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const WaveFunction& psi);
WaveFunction read_snapshot(const std::string& path);

struct SnapshotInfo {
    Grid grid;
    int components = 0;
    double norm_total = 0.0;
    std::vector<double> norm_per_component;
    double min_density = 0.0;
    double max_density = 0.0;
};

SnapshotInfo inspect_snapshot(const std::string& path);

}  // namespace nlsplit
