#include "nlsplit/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nlsplit {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// FFTW planning is not thread-safe; execution through fftw_execute_dft is.
// Plans are created once per grid shape with FFTW_UNALIGNED so they can run
// on any caller buffer.
const PlanPair& plans_for(const Grid& grid) {
    static std::mutex mtx;
    static std::map<std::array<int, 4>, PlanPair> cache;

    std::array<int, 4> key{grid.dims, grid.points[0], grid.points[1], grid.points[2]};
    std::scoped_lock lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;

    std::vector<Complex> scratch(static_cast<std::size_t>(grid.total));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[3] = {grid.points[0], grid.points[1], grid.points[2]};

    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft(grid.dims, n, buf, buf, FFTW_FORWARD, flags);
    p.inverse = fftw_plan_dft(grid.dims, n, buf, buf, FFTW_BACKWARD, flags);
    if (!p.forward || !p.inverse)
        throw std::runtime_error("spectral: FFTW plan creation failed");
    return cache.emplace(key, p).first->second;
}

void scale(std::span<Complex> data, double s) {
    for (Complex& v : data)
        v *= s;
}

void execute(const fftw_plan& plan, std::span<Complex> data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward_inplace(const Grid& grid, std::span<Complex> data) {
    if (data.size() != static_cast<std::size_t>(grid.total))
        throw std::invalid_argument("forward_inplace: size mismatch");
    execute(plans_for(grid).forward, data);
    scale(data, 1.0 / std::sqrt(static_cast<double>(grid.total)));
}

void inverse_inplace(const Grid& grid, std::span<Complex> data) {
    if (data.size() != static_cast<std::size_t>(grid.total))
        throw std::invalid_argument("inverse_inplace: size mismatch");
    execute(plans_for(grid).inverse, data);
    scale(data, 1.0 / std::sqrt(static_cast<double>(grid.total)));
}

SpectralField to_spectral(const WaveFunction& psi) {
    SpectralField f{psi.grid(), psi.components(), psi.values()};
    for (int c = 0; c < f.components; ++c)
        forward_inplace(f.grid, {f.values.data() + static_cast<std::size_t>(c) * f.grid.total,
                                 static_cast<std::size_t>(f.grid.total)});
    return f;
}

WaveFunction from_spectral(const SpectralField& field) {
    WaveFunction psi(field.grid, field.components);
    psi.values() = field.values;
    for (int c = 0; c < field.components; ++c)
        inverse_inplace(field.grid, psi.component(c));
    return psi;
}

double spectral_norm(const SpectralField& field) {
    double s = 0.0;
    for (const Complex& v : field.values)
        s += std::norm(v);
    return std::sqrt(s * field.grid.cell_volume);
}

std::vector<Complex> laplacian(const Grid& grid, std::span<const Complex> field) {
    std::vector<Complex> out(field.begin(), field.end());
    forward_inplace(grid, out);
    const auto ksq = ksq_field(grid);
    for (std::int64_t i = 0; i < grid.total; ++i)
        out[static_cast<std::size_t>(i)] *= -ksq[static_cast<std::size_t>(i)];
    inverse_inplace(grid, out);
    return out;
}

std::vector<double> laplacian_real(const Grid& grid, std::span<const double> field) {
    std::vector<Complex> tmp(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        tmp[i] = field[i];
    tmp = laplacian(grid, tmp);
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        out[i] = tmp[i].real();
    return out;
}

std::array<std::vector<double>, 3> gradient_real(const Grid& grid,
                                                 std::span<const double> field) {
    std::vector<Complex> hat(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        hat[i] = field[i];
    forward_inplace(grid, hat);

    std::array<std::vector<double>, 3> out;
    for (int axis = 0; axis < grid.dims; ++axis) {
        std::vector<Complex> tmp(hat);
        const int n = grid.points[axis];
        std::int64_t idx = 0;
        for (int i0 = 0; i0 < grid.points[0]; ++i0)
            for (int i1 = 0; i1 < grid.points[1]; ++i1)
                for (int i2 = 0; i2 < grid.points[2]; ++i2, ++idx) {
                    const int m = (axis == 0) ? i0 : (axis == 1) ? i1 : i2;
                    double k = grid.wavenumbers[axis][m];
                    if (n % 2 == 0 && m == n / 2)
                        k = 0.0;  // unpaired mode cannot carry an odd derivative
                    tmp[static_cast<std::size_t>(idx)] *= Complex{0.0, k};
                }
        inverse_inplace(grid, tmp);
        out[axis].resize(field.size());
        for (std::size_t i = 0; i < field.size(); ++i)
            out[axis][i] = tmp[i].real();
    }
    return out;
}

}  // namespace nlsplit
