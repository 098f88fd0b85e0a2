#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace nlsplit {

using Complex = std::complex<double>;

/// Uniform periodic lattice in 1-3 dimensions.
///
/// Fields are flattened row-major with axis 0 slowest, so the flat index of
/// (i0, i1, i2) is (i0*n1 + i1)*n2 + i2. Coordinates run over [-L/2, L/2)
/// with x_i = -L/2 + i*dx. Wavenumbers follow the standard DFT ordering
/// k(m) = 2*pi*m~/L with m~ the signed alias index in [-n/2, n/2); the
/// unpaired Nyquist mode m = n/2 is assigned k = -pi*n/L.
struct Grid {
    int dims = 1;
    std::array<int, 3> points{1, 1, 1};          // unused axes stay 1
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<std::vector<double>, 3> wavenumbers;
    std::int64_t total = 1;
    double cell_volume = 1.0;

    bool same_layout(const Grid& other) const;
};

/// Build a grid; rejects dims outside [1,3], axis sizes < 4 and non-positive
/// box lengths.
Grid make_grid(int dims, const std::vector<int>& points_per_axis,
               const std::vector<double>& lengths);

/// Coordinates along one axis, x_i = -L/2 + i*dx.
std::vector<double> axis_coordinates(const Grid& grid, int axis);

/// Per-point coordinate of one axis over the full flattened grid.
std::vector<double> coordinate_field(const Grid& grid, int axis);

/// Per-point k^2 = sum_axis k_axis^2 over the full flattened grid
/// (the spectral symbol of -laplacian).
std::vector<double> ksq_field(const Grid& grid);

}  // namespace nlsplit
