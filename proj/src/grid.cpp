#include "nlsplit/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlsplit {

bool Grid::same_layout(const Grid& other) const {
    return dims == other.dims && points == other.points && lengths == other.lengths;
}

Grid make_grid(int dims, const std::vector<int>& points_per_axis,
               const std::vector<double>& lengths) {
    if (dims < 1 || dims > 3)
        throw std::invalid_argument("make_grid: dims must be 1, 2 or 3, got " +
                                    std::to_string(dims));
    if (static_cast<int>(points_per_axis.size()) != dims ||
        static_cast<int>(lengths.size()) != dims)
        throw std::invalid_argument("make_grid: need one point count and one length per axis");

    Grid g;
    g.dims = dims;
    g.total = 1;
    g.cell_volume = 1.0;
    for (int d = 0; d < dims; ++d) {
        const int n = points_per_axis[d];
        const double L = lengths[d];
        if (n < 4)
            throw std::invalid_argument("make_grid: axis " + std::to_string(d) +
                                        " needs at least 4 points, got " + std::to_string(n));
        if (!(L > 0.0))
            throw std::invalid_argument("make_grid: axis " + std::to_string(d) +
                                        " length must be positive");
        g.points[d] = n;
        g.lengths[d] = L;
        g.spacing[d] = L / n;
        g.total *= n;
        g.cell_volume *= g.spacing[d];

        auto& k = g.wavenumbers[d];
        k.resize(n);
        const double dk = 2.0 * std::numbers::pi / L;
        for (int m = 0; m < n; ++m) {
            const int alias = (m <= (n - 1) / 2) ? m : m - n;  // Nyquist lands on -n/2
            k[m] = dk * alias;
        }
    }
    // unused axes keep their defaults so 3-deep index loops stay uniform
    for (int d = dims; d < 3; ++d) {
        g.points[d] = 1;
        g.lengths[d] = 1.0;
        g.spacing[d] = 1.0;
        g.wavenumbers[d] = {0.0};
    }
    return g;
}

std::vector<double> axis_coordinates(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.dims)
        throw std::invalid_argument("axis_coordinates: axis out of range");
    const int n = grid.points[axis];
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = -0.5 * grid.lengths[axis] + i * grid.spacing[axis];
    return x;
}

std::vector<double> coordinate_field(const Grid& grid, int axis) {
    const auto x = axis_coordinates(grid, axis);
    std::vector<double> out(static_cast<std::size_t>(grid.total));
    std::int64_t idx = 0;
    for (int i0 = 0; i0 < grid.points[0]; ++i0)
        for (int i1 = 0; i1 < grid.points[1]; ++i1)
            for (int i2 = 0; i2 < grid.points[2]; ++i2, ++idx) {
                const int i = (axis == 0) ? i0 : (axis == 1) ? i1 : i2;
                out[static_cast<std::size_t>(idx)] = x[i];
            }
    return out;
}

std::vector<double> ksq_field(const Grid& grid) {
    std::vector<double> out(static_cast<std::size_t>(grid.total));
    std::int64_t idx = 0;
    for (int i0 = 0; i0 < grid.points[0]; ++i0) {
        const double k0 = grid.wavenumbers[0][i0];
        for (int i1 = 0; i1 < grid.points[1]; ++i1) {
            const double k1 = grid.wavenumbers[1][i1];
            for (int i2 = 0; i2 < grid.points[2]; ++i2, ++idx) {
                const double k2 = grid.wavenumbers[2][i2];
                out[static_cast<std::size_t>(idx)] = k0 * k0 + k1 * k1 + k2 * k2;
            }
        }
    }
    return out;
}

}  // namespace nlsplit
