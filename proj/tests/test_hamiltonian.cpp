#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsplit/hamiltonian.hpp"
#include "nlsplit/oracle.hpp"
#include "test_support.hpp"

using namespace nlsplit;

namespace {

WaveFunction constant_state(const Grid& g, int components, Complex value) {
    WaveFunction psi(g, components);
    for (auto& v : psi.values())
        v = value;
    return psi;
}

}  // namespace

TEST_CASE("eval_nonlinear") {
    const Grid g = make_grid(1, {16}, {4.0});

    SUBCASE("cubic on a constant state") {
        const auto psi = constant_state(g, 1, Complex{0.5, 0.0});
        const auto field = eval_nonlinear(Cubic{1.0}, psi);
        for (double v : field)
            CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("cubic on zero is zero") {
        const WaveFunction psi(g, 1);
        for (double v : eval_nonlinear(Cubic{2.7}, psi))
            CHECK(v == 0.0);
    }
    SUBCASE("coupled cubic pointwise arithmetic") {
        // |phi_0|^2 = 1, |phi_1|^2 = 2 everywhere
        WaveFunction psi(g, 2);
        for (auto& v : psi.component(0))
            v = 1.0;
        for (auto& v : psi.component(1))
            v = std::sqrt(2.0);
        const CoupledCubic cc{2, {1.0, 2.0, 3.0, 4.0}};
        const auto field = eval_nonlinear(cc, psi);
        const std::size_t n = static_cast<std::size_t>(g.total);
        CHECK(field[0] == doctest::Approx(1.0 * 1 + 2.0 * 2).epsilon(1e-14));  // 5
        CHECK(field[n] == doctest::Approx(3.0 * 1 + 4.0 * 2).epsilon(1e-14));  // 11
    }
    SUBCASE("component mismatch is rejected") {
        const WaveFunction psi(g, 3);
        CHECK_THROWS_AS(eval_nonlinear(CoupledCubic{2, {1, 0, 0, 1}}, psi),
                        std::invalid_argument);
        CHECK_THROWS_AS(eval_nonlinear(FourWaveMixing{}, psi), std::invalid_argument);
    }
    SUBCASE("locality: a point perturbation only moves that point") {
        WaveFunction psi = test_support::random_state(g, 1, 5);
        const auto before = eval_nonlinear(Cubic{1.3}, psi);
        psi.component(0)[7] += Complex{0.1, -0.05};
        const auto after = eval_nonlinear(Cubic{1.3}, psi);
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (i == 7)
                CHECK(std::abs(after[i] - before[i]) > 1e-3);
            else
                CHECK(after[i] == before[i]);
        }
    }
}

TEST_CASE("phase invariance") {
    const Grid g = make_grid(1, {32}, {8.0});
    const WaveFunction psi = test_support::random_state(g, 1, 17);

    SUBCASE("cubic is invariant to round-off") {
        CHECK(check_phase_invariance(Cubic{1.7}, psi, std::numbers::pi / 3.0) <= 1e-15);
    }
    SUBCASE("four-wave-mixing couplings are invariant") {
        const WaveFunction four = test_support::random_state(g, 4, 23);
        FourWaveMixing fwm;
        fwm.g = 0.8;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                fwm.phase_mod[j][k] = 0.1 * (j + 1) * (k + 1);
        CHECK(check_phase_invariance(fwm, four, 1.234) <= 1e-14);
    }
    SUBCASE("a deliberately phase-sensitive custom potential is flagged") {
        CustomLocal bad;
        bad.components = 1;
        bad.f = [](std::span<const Complex> amps, std::span<double> out) {
            out[0] = amps[0].real();  // depends on the phase, not the density
        };
        CHECK(check_phase_invariance(NonlinearPotential{bad}, psi, 0.7) > 1e-6);
    }
    SUBCASE("all shipped families, 100 random phases") {
        std::mt19937_64 rng(321);
        std::uniform_real_distribution<double> uni(-10.0, 10.0);
        const WaveFunction two = test_support::random_state(g, 2, 29);
        const WaveFunction four = test_support::random_state(g, 4, 31);
        CustomLocal density_custom;
        density_custom.components = 1;
        density_custom.f = [](std::span<const Complex> amps, std::span<double> out) {
            const double rho = std::norm(amps[0]);
            out[0] = std::tanh(rho) + 0.2 * rho * rho;
        };
        FourWaveMixing fwm;
        fwm.g = 0.3;
        fwm.phase_mod[0][1] = 0.5;
        fwm.phase_mod[1][0] = 0.5;
        for (int trial = 0; trial < 100; ++trial) {
            const double theta = uni(rng);
            CHECK(check_phase_invariance(Cubic{1.1}, psi, theta) <= 1e-12);
            CHECK(check_phase_invariance(CoupledCubic{2, {1, 0.5, 0.5, 2}}, two, theta) <=
                  1e-12);
            CHECK(check_phase_invariance(fwm, four, theta) <= 1e-12);
            CHECK(check_phase_invariance(NonlinearPotential{density_custom}, psi, theta) <=
                  1e-12);
        }
    }
}

TEST_CASE("energy") {
    SUBCASE("zero state has zero energy") {
        const Grid g = make_grid(1, {32}, {10.0});
        const WaveFunction psi(g, 1);
        const auto h0 = make_hamiltonian(g, 1, 1.0);
        CHECK(energy(psi, h0, Cubic{1.0}) == 0.0);
    }
    SUBCASE("harmonic ground state: energy equals the dense eigenvalue") {
        const Grid g = make_grid(1, {256}, {20.0});
        const auto x = axis_coordinates(g, 0);
        std::vector<double> vext(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            vext[i] = x[i] * x[i];
        WaveFunction psi(g, 1);
        for (std::size_t i = 0; i < x.size(); ++i)
            psi.component(0)[i] = std::exp(-0.5 * x[i] * x[i]);
        const double n2 = norm(psi) * norm(psi);
        const auto h0 = make_hamiltonian(g, 1, 1.0, vext);
        const double e = energy(psi, h0, Cubic{0.0});
        // analytic oscillator: lowest eigenvalue 1 under -d^2/dx^2 + x^2
        CHECK(e / n2 == doctest::Approx(1.0).epsilon(1e-10));
        // dense oracle cross-check: <psi|H0|psi> dV
        const auto dense = oracle::dense_h0(g, vext, 1.0);
        const auto v = oracle::to_vector(psi);
        const double quad = (v.adjoint() * (dense.matrix() * v))(0, 0).real() * g.cell_volume;
        CHECK(e == doctest::Approx(quad).epsilon(1e-10));
    }
    SUBCASE("bright soliton energy") {
        const Grid g = make_grid(1, {512}, {40.0});
        const auto x = axis_coordinates(g, 0);
        WaveFunction psi(g, 1);
        for (std::size_t i = 0; i < x.size(); ++i)
            psi.component(0)[i] = 1.0 / std::cosh(x[i]);
        const auto h0 = make_hamiltonian(g, 1, 1.0);
        // integral of sech'^2 - sech^4 = 2/3 - 4/3
        CHECK(energy(psi, h0, Cubic{-2.0}) == doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("asymmetric coupling matrix is refused") {
        const Grid g = make_grid(1, {16}, {4.0});
        const WaveFunction psi = test_support::random_state(g, 2, 3);
        const auto h0 = make_hamiltonian(g, 2, 1.0);
        CHECK_THROWS_AS(energy(psi, h0, CoupledCubic{2, {1, 2, 3, 4}}),
                        std::invalid_argument);
        CHECK_FALSE(energy_defined(CoupledCubic{2, {1, 2, 3, 4}}));
        CHECK(energy_defined(CoupledCubic{2, {1, 2, 2, 4}}));
    }
    SUBCASE("custom potentials have no energy functional") {
        const Grid g = make_grid(1, {16}, {4.0});
        const WaveFunction psi = test_support::random_state(g, 1, 3);
        const auto h0 = make_hamiltonian(g, 1, 1.0);
        CustomLocal c;
        c.components = 1;
        c.f = [](std::span<const Complex>, std::span<double> out) { out[0] = 0.0; };
        CHECK_THROWS_AS(energy(psi, h0, NonlinearPotential{c}), std::invalid_argument);
        CHECK_FALSE(energy_defined(NonlinearPotential{c}));
    }
    SUBCASE("energy via the complex inner product has negligible imaginary part") {
        const Grid g = make_grid(1, {64}, {12.0});
        const WaveFunction psi = test_support::smooth_state(g, 1, 41);
        const auto x = axis_coordinates(g, 0);
        std::vector<double> vext(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            vext[i] = 0.5 * x[i] * x[i];
        const auto h0 = make_hamiltonian(g, 1, 1.0, vext);
        const double e = energy(psi, h0, Cubic{1.0});
        // alternative route: <psi|H0|psi> + interaction, fully complex arithmetic
        const auto dense = oracle::dense_h0(g, vext, 1.0);
        const auto v = oracle::to_vector(psi);
        const Complex lin = (v.adjoint() * (dense.matrix() * v))(0, 0) * g.cell_volume;
        double quart = 0.0;
        for (const auto& a : psi.values())
            quart += 0.5 * std::norm(a) * std::norm(a);
        quart *= g.cell_volume;
        CHECK(std::abs(lin.imag()) <= 1e-12 * std::abs(lin.real()));
        CHECK(e == doctest::Approx(lin.real() + quart).epsilon(1e-9));
    }
}
