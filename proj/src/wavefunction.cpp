#include "nlsplit/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsplit {

WaveFunction::WaveFunction(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
    if (components < 1)
        throw std::invalid_argument("WaveFunction: need at least one component");
    values_.assign(static_cast<std::size_t>(components) * grid_.total, Complex{0.0, 0.0});
}

std::span<Complex> WaveFunction::component(int c) {
    if (c < 0 || c >= components_)
        throw std::invalid_argument("WaveFunction::component: index out of range");
    return {values_.data() + static_cast<std::size_t>(c) * grid_.total,
            static_cast<std::size_t>(grid_.total)};
}

std::span<const Complex> WaveFunction::component(int c) const {
    if (c < 0 || c >= components_)
        throw std::invalid_argument("WaveFunction::component: index out of range");
    return {values_.data() + static_cast<std::size_t>(c) * grid_.total,
            static_cast<std::size_t>(grid_.total)};
}

double norm(const WaveFunction& psi) {
    double s = 0.0;
    for (const Complex& v : psi.values())
        s += std::norm(v);
    return std::sqrt(s * psi.grid().cell_volume);
}

std::vector<double> component_norms(const WaveFunction& psi) {
    std::vector<double> out(psi.components());
    for (int c = 0; c < psi.components(); ++c) {
        double s = 0.0;
        for (const Complex& v : psi.component(c))
            s += std::norm(v);
        out[c] = std::sqrt(s * psi.grid().cell_volume);
    }
    return out;
}

bool all_finite(const WaveFunction& psi) {
    for (const Complex& v : psi.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

double max_abs(const WaveFunction& psi) {
    double m = 0.0;
    for (const Complex& v : psi.values())
        m = std::max(m, std::abs(v));
    return m;
}

}  // namespace nlsplit
