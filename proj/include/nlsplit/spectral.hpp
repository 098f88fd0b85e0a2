#pragma once

#include <array>
#include <span>
#include <vector>

#include "nlsplit/grid.hpp"
#include "nlsplit/wavefunction.hpp"

namespace nlsplit {

/// Spectral coefficients of a WaveFunction under the unitary DFT convention
/// (both directions scaled by 1/sqrt(N), so the l2 norm is preserved and
/// repeated kinetic phases need no rescaling).
struct SpectralField {
    Grid grid;
    int components = 1;
    std::vector<Complex> values;
};

SpectralField to_spectral(const WaveFunction& psi);
WaveFunction from_spectral(const SpectralField& field);

/// In-place unitary transforms of a single component slice.
void forward_inplace(const Grid& grid, std::span<Complex> data);
void inverse_inplace(const Grid& grid, std::span<Complex> data);

/// Norm evaluated from spectral coefficients (Parseval counterpart of norm()).
double spectral_norm(const SpectralField& field);

/// laplacian via -k^2 in spectral space; exact for band-limited fields.
std::vector<Complex> laplacian(const Grid& grid, std::span<const Complex> field);
std::vector<double> laplacian_real(const Grid& grid, std::span<const double> field);

/// Per-axis derivative via ik; the Nyquist mode is zeroed so odd-order
/// derivatives of real fields stay real.
std::array<std::vector<double>, 3> gradient_real(const Grid& grid,
                                                 std::span<const double> field);

}  // namespace nlsplit
