#include "nlsplit/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsplit/spectral.hpp"

namespace nlsplit {

std::span<const double> LinearHamiltonian::external(int c) const {
    if (external_potential.empty())
        return {};
    const std::size_t n = external_potential.size() / static_cast<std::size_t>(components);
    return {external_potential.data() + static_cast<std::size_t>(c) * n, n};
}

LinearHamiltonian make_hamiltonian(const Grid& grid, int components, double kappa,
                                   std::vector<double> external_potential) {
    if (components < 1)
        throw std::invalid_argument("make_hamiltonian: need at least one component");
    if (!(kappa > 0.0))
        throw std::invalid_argument("make_hamiltonian: kinetic coefficient must be positive");
    if (!external_potential.empty() &&
        external_potential.size() !=
            static_cast<std::size_t>(components) * static_cast<std::size_t>(grid.total))
        throw std::invalid_argument("make_hamiltonian: external potential size mismatch");
    for (double v : external_potential)
        if (!std::isfinite(v))
            throw std::invalid_argument("make_hamiltonian: external potential must be finite");
    LinearHamiltonian h;
    h.kinetic_coefficient = kappa;
    h.components = components;
    h.external_potential = std::move(external_potential);
    return h;
}

LinearHamiltonian make_harmonic_hamiltonian(const Grid& grid, int components, double kappa,
                                            double omega) {
    const std::size_t n = static_cast<std::size_t>(grid.total);
    std::vector<double> vext(n, 0.0);
    std::array<std::vector<double>, 3> grad;
    std::vector<double> lap(n, omega * omega * grid.dims);
    for (int d = 0; d < grid.dims; ++d) {
        const auto x = coordinate_field(grid, d);
        grad[d].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            vext[i] += 0.5 * omega * omega * x[i] * x[i];
            grad[d][i] = omega * omega * x[i];
        }
    }
    LinearHamiltonian h;
    h.kinetic_coefficient = kappa;
    h.components = components;
    h.external_potential.reserve(static_cast<std::size_t>(components) * n);
    h.external_laplacian.reserve(static_cast<std::size_t>(components) * n);
    for (int c = 0; c < components; ++c) {
        h.external_potential.insert(h.external_potential.end(), vext.begin(), vext.end());
        h.external_laplacian.insert(h.external_laplacian.end(), lap.begin(), lap.end());
        for (int d = 0; d < grid.dims; ++d)
            h.external_gradient[d].insert(h.external_gradient[d].end(), grad[d].begin(),
                                          grad[d].end());
    }
    if (!(kappa > 0.0))
        throw std::invalid_argument("make_harmonic_hamiltonian: kinetic coefficient must be "
                                    "positive");
    return h;
}

double CoupledCubic::coupling(int j, int k) const {
    return couplings[static_cast<std::size_t>(j) * components + k];
}

bool CoupledCubic::symmetric(double tol) const {
    for (int j = 0; j < components; ++j)
        for (int k = j + 1; k < components; ++k)
            if (std::abs(coupling(j, k) - coupling(k, j)) > tol)
                return false;
    return true;
}

int potential_components(const NonlinearPotential& pot) {
    return std::visit(
        [](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Cubic>)
                return 0;
            else if constexpr (std::is_same_v<T, CoupledCubic>)
                return p.components;
            else if constexpr (std::is_same_v<T, FourWaveMixing>)
                return 4;
            else
                return p.components;
        },
        pot);
}

namespace {

void require_components(const NonlinearPotential& pot, const WaveFunction& psi,
                        const char* who) {
    const int want = potential_components(pot);
    if (want != 0 && want != psi.components())
        throw std::invalid_argument(std::string(who) + ": potential expects " +
                                    std::to_string(want) + " components, state has " +
                                    std::to_string(psi.components()));
}

std::vector<double> densities(const WaveFunction& psi) {
    const std::size_t n = static_cast<std::size_t>(psi.points());
    std::vector<double> rho(static_cast<std::size_t>(psi.components()) * n);
    for (int c = 0; c < psi.components(); ++c) {
        const auto comp = psi.component(c);
        double* out = rho.data() + static_cast<std::size_t>(c) * n;
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::norm(comp[i]);
    }
    return rho;
}

}  // namespace

std::vector<double> eval_nonlinear(const NonlinearPotential& pot, const WaveFunction& psi) {
    require_components(pot, psi, "eval_nonlinear");
    const std::size_t n = static_cast<std::size_t>(psi.points());
    const int C = psi.components();
    std::vector<double> out(static_cast<std::size_t>(C) * n, 0.0);

    if (const auto* cubic = std::get_if<Cubic>(&pot)) {
        std::vector<double> total(n, 0.0);
        for (int c = 0; c < C; ++c) {
            const auto comp = psi.component(c);
            for (std::size_t i = 0; i < n; ++i)
                total[i] += std::norm(comp[i]);
        }
        for (int c = 0; c < C; ++c)
            for (std::size_t i = 0; i < n; ++i)
                out[static_cast<std::size_t>(c) * n + i] = cubic->g * total[i];
        return out;
    }
    if (const auto* coupled = std::get_if<CoupledCubic>(&pot)) {
        const auto rho = densities(psi);
        for (int j = 0; j < C; ++j)
            for (int k = 0; k < C; ++k) {
                const double gjk = coupled->coupling(j, k);
                if (gjk == 0.0)
                    continue;
                const double* rk = rho.data() + static_cast<std::size_t>(k) * n;
                double* oj = out.data() + static_cast<std::size_t>(j) * n;
                for (std::size_t i = 0; i < n; ++i)
                    oj[i] += gjk * rk[i];
            }
        return out;
    }
    if (const auto* fwm = std::get_if<FourWaveMixing>(&pot)) {
        const auto rho = densities(psi);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                const double w = fwm->phase_mod[j][k];
                if (w == 0.0)
                    continue;
                const double* rk = rho.data() + static_cast<std::size_t>(k) * n;
                double* oj = out.data() + static_cast<std::size_t>(j) * n;
                for (std::size_t i = 0; i < n; ++i)
                    oj[i] += w * rk[i];
            }
        return out;
    }
    const auto& custom = std::get<CustomLocal>(pot);
    std::vector<Complex> amps(C);
    std::vector<double> vals(C);
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < C; ++c)
            amps[static_cast<std::size_t>(c)] = psi.component(c)[i];
        custom.f(amps, vals);
        for (int c = 0; c < C; ++c)
            out[static_cast<std::size_t>(c) * n + i] = vals[static_cast<std::size_t>(c)];
    }
    return out;
}

std::pair<int, int> mixing_pair(int j) {
    switch (j) {
        case 1: return {0, 2};
        case 2: return {0, 3};
        case 3: return {1, 2};
        case 4: return {1, 3};
        default: throw std::invalid_argument("mixing_pair: j must be in 1..4");
    }
}

std::vector<Complex> mixing_coupling_field(const FourWaveMixing& pot,
                                           const WaveFunction& psi, int j) {
    if (psi.components() != 4)
        throw std::invalid_argument("mixing_coupling_field: need a 4-component state");
    const std::size_t n = static_cast<std::size_t>(psi.points());
    std::vector<Complex> c(n);
    // spectator components whose product sets the rotation angle
    int sa = 0, sb = 0;
    switch (j) {
        case 1: sa = 1; sb = 3; break;
        case 2: sa = 1; sb = 2; break;
        case 3: sa = 0; sb = 3; break;
        case 4: sa = 0; sb = 2; break;
        default: throw std::invalid_argument("mixing_coupling_field: j must be in 1..4");
    }
    const auto a = psi.component(sa);
    const auto b = psi.component(sb);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = pot.g * std::conj(a[i]) * b[i];
    return c;
}

double check_phase_invariance(const NonlinearPotential& pot, const WaveFunction& psi,
                              double theta) {
    require_components(pot, psi, "check_phase_invariance");
    WaveFunction rotated = psi;
    const Complex phase = std::polar(1.0, theta);
    for (Complex& v : rotated.values())
        v *= phase;

    double dev = 0.0;
    const auto a = eval_nonlinear(pot, psi);
    const auto b = eval_nonlinear(pot, rotated);
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a[i] - b[i]));

    if (const auto* fwm = std::get_if<FourWaveMixing>(&pot)) {
        for (int j = 1; j <= 4; ++j) {
            const auto ca = mixing_coupling_field(*fwm, psi, j);
            const auto cb = mixing_coupling_field(*fwm, rotated, j);
            for (std::size_t i = 0; i < ca.size(); ++i)
                dev = std::max(dev, std::abs(ca[i] - cb[i]));
        }
    }
    return dev;
}

bool energy_defined(const NonlinearPotential& pot) {
    if (std::holds_alternative<Cubic>(pot))
        return true;
    if (const auto* coupled = std::get_if<CoupledCubic>(&pot))
        return coupled->symmetric();
    if (const auto* fwm = std::get_if<FourWaveMixing>(&pot)) {
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (fwm->phase_mod[j][k] != fwm->phase_mod[k][j])
                    return false;
        return true;
    }
    return false;
}

double energy(const WaveFunction& psi, const LinearHamiltonian& h0,
              const NonlinearPotential& pot) {
    require_components(pot, psi, "energy");
    const Grid& grid = psi.grid();
    const std::size_t n = static_cast<std::size_t>(grid.total);
    const double dv = grid.cell_volume;

    // kinetic part from spectral coefficients: sum kappa k^2 |psi_hat|^2 dV
    double kinetic = 0.0;
    const auto ksq = ksq_field(grid);
    const auto hat = to_spectral(psi);
    for (int c = 0; c < psi.components(); ++c) {
        const Complex* f = hat.values.data() + static_cast<std::size_t>(c) * n;
        for (std::size_t i = 0; i < n; ++i)
            kinetic += ksq[i] * std::norm(f[i]);
    }
    kinetic *= h0.kinetic_coefficient * dv;

    double external = 0.0;
    if (!h0.external_potential.empty()) {
        for (int c = 0; c < psi.components(); ++c) {
            const auto vext = h0.external(c);
            const auto comp = psi.component(c);
            for (std::size_t i = 0; i < n; ++i)
                external += vext[i] * std::norm(comp[i]);
        }
        external *= dv;
    }

    double interaction = 0.0;
    if (const auto* cubic = std::get_if<Cubic>(&pot)) {
        std::vector<double> total(n, 0.0);
        for (int c = 0; c < psi.components(); ++c) {
            const auto comp = psi.component(c);
            for (std::size_t i = 0; i < n; ++i)
                total[i] += std::norm(comp[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            interaction += 0.5 * cubic->g * total[i] * total[i];
        interaction *= dv;
    } else if (const auto* coupled = std::get_if<CoupledCubic>(&pot)) {
        if (!coupled->symmetric())
            throw std::invalid_argument("energy: coupling matrix must be symmetric");
        const auto rho = densities(psi);
        for (int j = 0; j < coupled->components; ++j)
            for (int k = 0; k < coupled->components; ++k) {
                const double gjk = coupled->coupling(j, k);
                if (gjk == 0.0)
                    continue;
                const double* rj = rho.data() + static_cast<std::size_t>(j) * n;
                const double* rk = rho.data() + static_cast<std::size_t>(k) * n;
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += rj[i] * rk[i];
                interaction += 0.5 * gjk * s;
            }
        interaction *= dv;
    } else if (const auto* fwm = std::get_if<FourWaveMixing>(&pot)) {
        if (!energy_defined(pot))
            throw std::invalid_argument("energy: phase-modulation matrix must be symmetric");
        const auto rho = densities(psi);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                const double w = fwm->phase_mod[j][k];
                if (w == 0.0)
                    continue;
                const double* rj = rho.data() + static_cast<std::size_t>(j) * n;
                const double* rk = rho.data() + static_cast<std::size_t>(k) * n;
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += rj[i] * rk[i];
                interaction += 0.5 * w * s;
            }
        // mixing term whose functional gradient reproduces the 2g cross terms
        const auto p0 = psi.component(0);
        const auto p1 = psi.component(1);
        const auto p2 = psi.component(2);
        const auto p3 = psi.component(3);
        double mix = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mix += (std::conj(p0[i]) * std::conj(p1[i]) * p2[i] * p3[i]).real();
        interaction += 4.0 * fwm->g * mix;
        interaction *= dv;
    } else {
        throw std::invalid_argument("energy: not defined for custom local potentials");
    }

    return kinetic + external + interaction;
}

}  // namespace nlsplit
