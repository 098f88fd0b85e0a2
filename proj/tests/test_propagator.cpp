#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsplit/convergence.hpp"
#include "nlsplit/oracle.hpp"
#include "nlsplit/propagator.hpp"
#include "nlsplit/spectral.hpp"
#include "test_support.hpp"

using namespace nlsplit;
using test_support::rel_dev;

namespace {

const Grid kGrid = make_grid(1, {64}, {16.0});

std::vector<double> harmonic(const Grid& g, double omega) {
    const auto x = coordinate_field(g, 0);
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 0.5 * omega * omega * x[i] * x[i];
    return v;
}

FourWaveMixing test_fwm(double g) {
    FourWaveMixing fwm;
    fwm.g = g;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            fwm.phase_mod[j][k] = 0.2 + 0.1 * ((j + k) % 3);
    return fwm;
}

}  // namespace

TEST_CASE("apply_kinetic_phase") {
    SUBCASE("theta = 0 is the identity") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 1);
        const WaveFunction before = psi;
        apply_kinetic_phase(psi, 0.0, 1.0);
        CHECK(rel_dev(psi, before) == 0.0);
    }
    SUBCASE("plane wave picks up the eigenvalue phase") {
        WaveFunction psi(kGrid, 1);
        const double k0 = kGrid.wavenumbers[0][4];
        const auto x = axis_coordinates(kGrid, 0);
        for (int i = 0; i < kGrid.points[0]; ++i)
            psi.component(0)[i] = std::polar(1.0, k0 * x[i]);
        const double theta = 0.37, kappa = 1.4;
        WaveFunction expect = psi;
        const Complex phase = std::polar(1.0, -theta * kappa * k0 * k0);
        for (auto& v : expect.values())
            v *= phase;
        apply_kinetic_phase(psi, theta, kappa);
        CHECK(rel_dev(psi, expect) < 1e-13);
    }
    SUBCASE("norm preserved on random states") {
        WaveFunction psi = test_support::random_state(kGrid, 2, 2);
        const double n0 = norm(psi);
        apply_kinetic_phase(psi, 0.93, 1.0);
        CHECK(std::abs(norm(psi) - n0) <= 1e-13 * n0);
    }
}

TEST_CASE("apply_potential_phase") {
    const auto h0_free = make_hamiltonian(kGrid, 1, 1.0);
    SUBCASE("free problem is the identity") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 3);
        const WaveFunction before = psi;
        apply_potential_phase(psi, 0.8, h0_free, Cubic{0.0});
        CHECK(rel_dev(psi, before) < 1e-15);
    }
    SUBCASE("constant state gets the exact phase") {
        WaveFunction psi(kGrid, 1);
        const Complex c{0.4, 0.3};
        for (auto& v : psi.values())
            v = c;
        const double g = 1.7, theta = 0.61;
        apply_potential_phase(psi, theta, h0_free, Cubic{g});
        const Complex expect = std::polar(1.0, -theta * g * std::norm(c)) * c;
        for (const auto& v : psi.values()) {
            CHECK(std::abs(v - expect) < 1e-15);
            CHECK(std::abs(std::abs(v) - std::abs(c)) < 1e-15);
        }
    }
    SUBCASE("pointwise density invariance") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 4);
        const WaveFunction before = psi;
        apply_potential_phase(psi, 2.13, make_hamiltonian(kGrid, 1, 1.0, harmonic(kGrid, 1.0)),
                              Cubic{-0.9});
        for (std::size_t i = 0; i < psi.values().size(); ++i)
            CHECK(std::abs(psi.values()[i]) ==
                  doctest::Approx(std::abs(before.values()[i])).epsilon(1e-15));
    }
}

TEST_CASE("apply_mixing_rotation") {
    const auto fwm = test_fwm(0.7);
    SUBCASE("vanishing coupling is the identity") {
        WaveFunction psi = test_support::random_state(kGrid, 4, 5);
        for (auto& v : psi.component(1))
            v = 0.0;  // kills c = g conj(phi_1) phi_3 of rotation 1
        const WaveFunction before = psi;
        apply_mixing_rotation(psi, 0.9, 1, fwm);
        CHECK(rel_dev(psi, before) == 0.0);
    }
    SUBCASE("pairwise density conservation, spectators bit-identical") {
        for (int j = 1; j <= 4; ++j) {
            WaveFunction psi = test_support::random_state(kGrid, 4, 10 + j);
            const WaveFunction before = psi;
            apply_mixing_rotation(psi, 0.53, j, fwm);
            const auto [a, b] = mixing_pair(j);
            for (int c = 0; c < 4; ++c) {
                if (c == a || c == b)
                    continue;
                for (std::size_t i = 0; i < psi.component(c).size(); ++i)
                    CHECK(psi.component(c)[i] == before.component(c)[i]);
            }
            for (std::size_t i = 0; i < psi.component(a).size(); ++i) {
                const double d0 = std::norm(before.component(a)[i]) +
                                  std::norm(before.component(b)[i]);
                const double d1 =
                    std::norm(psi.component(a)[i]) + std::norm(psi.component(b)[i]);
                CHECK(std::abs(d1 - d0) <= 1e-14 * std::max(1.0, d0));
            }
        }
    }
    SUBCASE("small-angle limit reproduces the mixing term") {
        WaveFunction psi = test_support::smooth_state(kGrid, 4, 20);
        const double theta = 1e-6;
        WaveFunction rotated = psi;
        apply_mixing_rotation(rotated, theta, 1, fwm);
        const auto c = mixing_coupling_field(fwm, psi, 1);
        // d/dtheta at 0 on the first coupled component is -i c phi_2
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Complex fd = (rotated.component(0)[i] - psi.component(0)[i]) / theta;
            const Complex expect = -Complex{0.0, 1.0} * c[i] * psi.component(2)[i];
            CHECK(std::abs(fd - expect) <= 1e-5 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("step") {
    const auto h0_free = make_hamiltonian(kGrid, 1, 1.0);
    SUBCASE("free evolution collapses to one kinetic factor") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 6);
        WaveFunction expect = psi;
        const double dt = 0.21;
        apply_kinetic_phase(expect, dt, 1.0);
        step(psi, strang(), dt, h0_free, Cubic{0.0});
        CHECK(rel_dev(psi, expect) < 1e-14);
    }
    SUBCASE("strang matches the hand-unrolled most-recent-update product") {
        const auto vext = harmonic(kGrid, 1.0);
        const auto h0 = make_hamiltonian(kGrid, 1, 1.0, vext);
        const NonlinearPotential pot = Cubic{1.3};
        const double dt = 0.05;
        WaveFunction psi = test_support::smooth_state(kGrid, 1, 7);
        WaveFunction manual = psi;
        // half kinetic, then the full nonlinear phase evaluated on the
        // intermediate state, then half kinetic
        apply_kinetic_phase(manual, dt / 2.0, 1.0);
        apply_potential_phase(manual, dt, h0, pot);
        apply_kinetic_phase(manual, dt / 2.0, 1.0);
        step(psi, strang(), dt, h0, pot);
        CHECK(rel_dev(psi, manual) == 0.0);
    }
    SUBCASE("norm drift per step stays at round-off") {
        const auto h0 = make_hamiltonian(kGrid, 1, 1.0, harmonic(kGrid, 1.0));
        for (const char* name : {"strang", "forest-ruth", "order6", "order8"}) {
            WaveFunction psi = test_support::random_state(kGrid, 1, 8);
            const double n0 = norm(psi);
            step(psi, scheme_by_name(name), 0.01, h0, Cubic{1.0});
            CHECK(std::abs(norm(psi) - n0) <= 1e-13 * n0);
        }
    }
    SUBCASE("linear limit agrees with the dense exponential at scheme order") {
        const Grid g = make_grid(1, {32}, {10.0});
        const auto vext = harmonic(g, 1.0);
        const auto h0 = make_hamiltonian(g, 1, 1.0, vext);
        const auto dense = oracle::dense_h0(g, vext, 1.0);
        const WaveFunction psi0 = test_support::smooth_state(g, 1, 9);
        const auto v0 = oracle::to_vector(psi0);
        for (const char* name : {"strang", "forest-ruth"}) {
            const auto scheme = scheme_by_name(name);
            double prev_err = 0.0;
            for (int k = 0; k < 2; ++k) {
                const double dt = 0.1 / (k + 1);
                WaveFunction psi = psi0;
                step(psi, scheme, dt, h0, Cubic{0.0});
                const auto exact = oracle::dense_exp_apply(dense, dt, v0);
                const double err =
                    (oracle::to_vector(psi) - exact).norm() * std::sqrt(g.cell_volume);
                if (k == 0)
                    prev_err = err;
                else
                    // halving dt must shrink the one-step error by ~2^(order+1)
                    CHECK(prev_err / err ==
                          doctest::Approx(std::pow(2.0, scheme.order + 1)).epsilon(0.35));
            }
        }
    }
}

TEST_CASE("chin_step") {
    SUBCASE("free problem reduces to pure kinetic evolution") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 11);
        WaveFunction expect = psi;
        const double dt = 0.17;
        apply_kinetic_phase(expect, dt, 1.0);
        chin_step(psi, dt, make_hamiltonian(kGrid, 1, 1.0), Cubic{0.0},
                  CommutatorVariant::paper);
        CHECK(rel_dev(psi, expect) < 1e-14);
    }
    SUBCASE("commutator field: linear limit of the printed variant") {
        // V = x^2 = 0.5*omega^2 x^2 at omega = sqrt(2); -(grad V)^2 = -4 x^2
        const Grid g = make_grid(1, {128}, {20.0});
        const auto x = coordinate_field(g, 0);
        const auto h0 = make_harmonic_hamiltonian(g, 1, 1.0, std::sqrt(2.0));
        ExternalDerivatives vd;
        vd.gradient[0] = h0.external_gradient[0];
        vd.laplacian = h0.external_laplacian;
        std::vector<double> rho(x.size(), 0.0);
        const auto w =
            commutator_field(g, rho, h0.external(0), 0.0, CommutatorVariant::paper, &vd);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(w[i] == doctest::Approx(-4.0 * x[i] * x[i]).epsilon(1e-12).scale(400.0));
        const auto w2 =
            commutator_field(g, rho, h0.external(0), 0.0, CommutatorVariant::canonical, &vd);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(w2[i] == doctest::Approx(2.0 * w[i]).scale(800.0));
    }
    SUBCASE("commutator field: spectral derivatives of a periodic potential") {
        const Grid g = make_grid(1, {128}, {20.0});
        const auto x = coordinate_field(g, 0);
        const double k = 2.0 * std::numbers::pi / 20.0;
        std::vector<double> vext(x.size()), rho(x.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i)
            vext[i] = 0.8 * std::cos(k * x[i]);
        const auto w = commutator_field(g, rho, vext, 0.0, CommutatorVariant::paper);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double dv = -0.8 * k * std::sin(k * x[i]);
            CHECK(w[i] == doctest::Approx(-dv * dv).epsilon(1e-10).scale(1.0));
        }
    }
    SUBCASE("constant density, no trap: field vanishes") {
        std::vector<double> rho(static_cast<std::size_t>(kGrid.total), 0.73);
        const auto w = commutator_field(kGrid, rho, {}, 1.5, CommutatorVariant::paper);
        for (double v : w)
            CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("requirements are enforced") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 12);
        CHECK_THROWS_AS(chin_step(psi, 0.1, make_hamiltonian(kGrid, 1, 2.0), Cubic{1.0},
                                  CommutatorVariant::paper),
                        std::invalid_argument);
        CHECK_THROWS_AS(chin_step(psi, 0.1, make_hamiltonian(kGrid, 1, 1.0),
                                  CoupledCubic{1, {1.0}}, CommutatorVariant::paper),
                        std::invalid_argument);
    }
}

TEST_CASE("fwm_step") {
    SUBCASE("zero mixing reduces to a strang step with the diagonal couplings") {
        const auto fwm = test_fwm(0.0);
        const auto h0 = make_hamiltonian(kGrid, 4, 1.0);
        WaveFunction psi = test_support::random_state(kGrid, 4, 13);
        WaveFunction viastep = psi;
        fwm_step(psi, 0.04, h0, fwm);
        CoupledCubic diag{4, std::vector<double>(16)};
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                diag.couplings[static_cast<std::size_t>(j) * 4 + k] = fwm.phase_mod[j][k];
        step(viastep, strang(), 0.04, h0, diag);
        CHECK(rel_dev(psi, viastep) < 1e-15);
    }
    SUBCASE("norm preserved per step") {
        const auto fwm = test_fwm(0.8);
        const auto h0 = make_hamiltonian(kGrid, 4, 1.0, [] {
            std::vector<double> v;
            for (int c = 0; c < 4; ++c) {
                const auto h = harmonic(kGrid, 1.0 + 0.1 * c);
                v.insert(v.end(), h.begin(), h.end());
            }
            return v;
        }());
        WaveFunction psi = test_support::random_state(kGrid, 4, 14);
        const double n0 = norm(psi);
        fwm_step(psi, 0.02, h0, fwm);
        CHECK(std::abs(norm(psi) - n0) <= 1e-13 * n0);
    }
}

TEST_CASE("time symmetry of palindromic steps") {
    const auto vext = harmonic(kGrid, 1.0);
    SUBCASE("splitting schemes") {
        const auto h0 = make_hamiltonian(kGrid, 1, 1.0, vext);
        for (const char* name : {"strang", "forest-ruth", "order6"}) {
            WaveFunction psi = test_support::smooth_state(kGrid, 1, 15);
            const WaveFunction start = psi;
            const auto scheme = scheme_by_name(name);
            step(psi, scheme, 0.05, h0, Cubic{1.0});
            step(psi, scheme, -0.05, h0, Cubic{1.0});
            CHECK(rel_dev(psi, start) < 1e-13);
        }
    }
    SUBCASE("gradient step") {
        const auto h0 = make_hamiltonian(kGrid, 1, 1.0, vext);
        WaveFunction psi = test_support::smooth_state(kGrid, 1, 16);
        const WaveFunction start = psi;
        chin_step(psi, 0.05, h0, Cubic{1.0}, CommutatorVariant::canonical);
        chin_step(psi, -0.05, h0, Cubic{1.0}, CommutatorVariant::canonical);
        CHECK(rel_dev(psi, start) < 1e-13);
    }
    SUBCASE("four-wave-mixing step") {
        const auto fwm = test_fwm(0.6);
        const auto h0 = make_hamiltonian(kGrid, 4, 1.0);
        WaveFunction psi = test_support::smooth_state(kGrid, 4, 17);
        const WaveFunction start = psi;
        fwm_step(psi, 0.05, h0, fwm);
        fwm_step(psi, -0.05, h0, fwm);
        CHECK(rel_dev(psi, start) < 1e-13);
    }
}

TEST_CASE("propagate") {
    const auto vext = harmonic(kGrid, 1.0);
    const auto h0 = make_hamiltonian(kGrid, 1, 1.0, vext);

    SUBCASE("zero steps is the identity") {
        WaveFunction psi = test_support::random_state(kGrid, 1, 18);
        const WaveFunction before = psi;
        PropagationConfig cfg;
        cfg.dt = 0.1;
        cfg.n_steps = 0;
        cfg.stepper.scheme = strang();
        const auto records = propagate(psi, cfg, h0, Cubic{1.0});
        CHECK(rel_dev(psi, before) == 0.0);
        REQUIRE(records.size() == 1);
        CHECK(records[0].time == 0.0);
        CHECK(records[0].energy.has_value());
    }
    SUBCASE("records carry consistent norms and cadence") {
        WaveFunction psi = test_support::smooth_state(kGrid, 1, 19);
        PropagationConfig cfg;
        cfg.dt = 0.01;
        cfg.n_steps = 10;
        cfg.observe_every = 3;
        cfg.stepper.scheme = strang();
        const auto records = propagate(psi, cfg, h0, Cubic{1.0});
        // t = 0, 3, 6, 9 and the final step 10
        REQUIRE(records.size() == 5);
        CHECK(records.back().time == doctest::Approx(0.1));
        for (const auto& r : records) {
            double s = 0.0;
            for (double v : r.norm_per_component)
                s += v * v;
            CHECK(r.norm_total * r.norm_total == doctest::Approx(s).epsilon(1e-14));
        }
    }
    SUBCASE("non-finite amplitudes abort with the step index") {
        CustomLocal exploding;
        exploding.components = 1;
        exploding.f = [](std::span<const Complex> amps, std::span<double> out) {
            // turns finite amplitudes into a non-finite phase after a while
            out[0] = 1.0 / (std::norm(amps[0]) - 1.0);
        };
        WaveFunction psi(kGrid, 1);
        for (auto& v : psi.values())
            v = 1.0;  // density exactly 1 -> division by zero in the potential
        PropagationConfig cfg;
        cfg.dt = 0.01;
        cfg.n_steps = 5;
        cfg.stepper.scheme = strang();
        CHECK_THROWS_AS(propagate(psi, cfg, make_hamiltonian(kGrid, 1, 1.0),
                                  NonlinearPotential{exploding}),
                        propagation_error);
        try {
            WaveFunction psi2(kGrid, 1);
            for (auto& v : psi2.values())
                v = 1.0;
            propagate(psi2, cfg, make_hamiltonian(kGrid, 1, 1.0),
                      NonlinearPotential{exploding});
        } catch (const propagation_error& e) {
            CHECK(e.step_index() == 1);
        }
    }
    SUBCASE("stationary harmonic ground state, linear limit") {
        const Grid g = make_grid(1, {128}, {20.0});
        const auto x = coordinate_field(g, 0);
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            v[i] = x[i] * x[i];
        WaveFunction psi(g, 1);
        for (std::size_t i = 0; i < x.size(); ++i)
            psi.component(0)[i] = std::exp(-0.5 * x[i] * x[i]);
        const double n0 = norm(psi);
        for (auto& a : psi.values())
            a /= n0;
        const WaveFunction start = psi;
        PropagationConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_steps = 500;
        cfg.observe_every = 100;
        cfg.stepper.scheme = scheme_by_name("forest-ruth");
        propagate(psi, cfg, make_hamiltonian(g, 1, 1.0, v), Cubic{0.0});
        // density stationary; accumulated phase rate equals the eigenvalue 1
        double max_density_dev = 0.0;
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < psi.values().size(); ++i) {
            max_density_dev = std::max(max_density_dev,
                                       std::abs(std::norm(psi.values()[i]) -
                                                std::norm(start.values()[i])));
            overlap += std::conj(start.values()[i]) * psi.values()[i] * g.cell_volume;
        }
        CHECK(max_density_dev < 1e-9);
        const double phase_rate = -std::arg(overlap) / 0.5;
        CHECK(phase_rate == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("most-recent-update order preservation on a nonlinear problem") {
    // quick check at unit-test scale; the acceptance suite runs the full one
    const Grid g = make_grid(1, {64}, {16.0});
    const auto x = coordinate_field(g, 0);
    std::vector<double> vext(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        vext[i] = 0.5 * x[i] * x[i];
    WaveFunction psi(g, 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        psi.component(0)[i] = std::exp(-0.5 * x[i] * x[i]);
    const double n0 = norm(psi);
    for (auto& v : psi.values())
        v /= n0;

    Problem problem{g, make_hamiltonian(g, 1, 1.0, vext), Cubic{1.0}, psi};
    Stepper stepper;
    stepper.kind = Stepper::Kind::split;
    stepper.scheme = strang();
    const std::vector<double> dts{0.02, 0.01, 0.005, 0.0025};
    const auto res = convergence_study(problem, stepper, dts, 0.5);
    CHECK(res.slope == doctest::Approx(2.0).epsilon(0.25 / 2.0));

    stepper.scheme = forest_ruth();
    const auto res4 = convergence_study(problem, stepper, dts, 0.5);
    CHECK(res4.slope == doctest::Approx(4.0).epsilon(0.25 / 4.0));
}
