#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "nlsplit/oracle.hpp"
#include "nlsplit/wavefunction.hpp"

namespace test_support {

using nlsplit::Complex;

inline double rel_dev(const nlsplit::WaveFunction& a, const nlsplit::WaveFunction& b) {
    double num = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        num = std::max(num, std::abs(a.values()[i] - b.values()[i]));
        scale = std::max({scale, std::abs(a.values()[i]), std::abs(b.values()[i])});
    }
    return scale > 0.0 ? num / scale : num;
}

inline nlsplit::WaveFunction random_state(const nlsplit::Grid& grid, int components,
                                          std::uint64_t seed) {
    // full-band random state for unitarity-style checks
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    nlsplit::WaveFunction psi(grid, components);
    for (Complex& v : psi.values())
        v = Complex{uni(rng), uni(rng)};
    const double n = nlsplit::norm(psi);
    for (Complex& v : psi.values())
        v /= n;
    return psi;
}

inline nlsplit::WaveFunction smooth_state(const nlsplit::Grid& grid, int components,
                                          std::uint64_t seed) {
    return nlsplit::oracle::random_band_limited_state(
        grid, components, std::max(2, grid.points[0] / 8), seed);
}

}  // namespace test_support
