#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsplit/grid.hpp"
#include "nlsplit/spectral.hpp"
#include "test_support.hpp"

using namespace nlsplit;
using test_support::rel_dev;
constexpr double pi = std::numbers::pi;

TEST_CASE("make_grid wavenumbers and spacing") {
    SUBCASE("L = 2*pi makes k the signed alias index") {
        const Grid g = make_grid(1, {8}, {2.0 * pi});
        const std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
        REQUIRE(g.wavenumbers[0].size() == 8);
        for (int i = 0; i < 8; ++i)
            CHECK(g.wavenumbers[0][i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
    SUBCASE("spacing is L/n") {
        const Grid g = make_grid(1, {4}, {1.0});
        CHECK(g.spacing[0] == doctest::Approx(0.25));
    }
    SUBCASE("2D point count and k step") {
        const Grid g = make_grid(2, {16, 16}, {10.0, 10.0});
        CHECK(g.total == 256);
        CHECK(g.wavenumbers[0][1] == doctest::Approx(2.0 * pi / 10.0));
        CHECK(g.wavenumbers[1][1] == doctest::Approx(2.0 * pi / 10.0));
    }
    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(make_grid(0, {8}, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(4, {8, 8, 8, 8}, {1, 1, 1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(1, {3}, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(1, {8}, {0.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(1, {8}, {-2.0}), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(2, {8}, {1.0}), std::invalid_argument);
    }
    SUBCASE("wavenumber table antisymmetry below Nyquist") {
        for (int n : {8, 12, 64}) {
            const Grid g = make_grid(1, {n}, {7.3});
            for (int m = 1; m < n / 2; ++m)
                CHECK(g.wavenumbers[0][n - m] == doctest::Approx(-g.wavenumbers[0][m]));
            CHECK(g.wavenumbers[0][n / 2] == doctest::Approx(-pi * n / 7.3));
        }
    }
}

TEST_CASE("transforms are unitary and invert exactly") {
    SUBCASE("plane wave populates a single mode") {
        const Grid g = make_grid(1, {32}, {10.0});
        WaveFunction psi(g, 1);
        const double k0 = g.wavenumbers[0][3];
        const auto x = axis_coordinates(g, 0);
        for (int i = 0; i < 32; ++i)
            psi.component(0)[i] = std::polar(1.0, k0 * x[i]);
        const auto hat = to_spectral(psi);
        for (int m = 0; m < 32; ++m) {
            const double mag = std::abs(hat.values[m]);
            if (m == 3)
                CHECK(mag == doctest::Approx(std::sqrt(32.0)).epsilon(1e-12));
            else
                CHECK(mag < 1e-12 * std::sqrt(32.0));
        }
    }
    SUBCASE("round trip and norm preservation, dims 1-3") {
        const Grid grids[] = {make_grid(1, {64}, {10.0}), make_grid(2, {16, 8}, {5.0, 4.0}),
                              make_grid(3, {8, 8, 4}, {3.0, 2.0, 1.0})};
        std::uint64_t seed = 11;
        for (const Grid& g : grids) {
            const WaveFunction psi = test_support::random_state(g, 2, seed++);
            const auto hat = to_spectral(psi);
            CHECK(std::abs(spectral_norm(hat) - norm(psi)) <= 1e-13 * norm(psi));
            const WaveFunction back = from_spectral(hat);
            CHECK(rel_dev(psi, back) < 1e-13);
        }
    }
    SUBCASE("constant field populates only the zero mode") {
        const Grid g = make_grid(2, {8, 8}, {1.0, 1.0});
        WaveFunction psi(g, 1);
        for (auto& v : psi.values())
            v = Complex{0.7, -0.2};
        const auto hat = to_spectral(psi);
        CHECK(std::abs(hat.values[0]) == doctest::Approx(8.0 * std::abs(Complex{0.7, -0.2})));
        for (std::size_t i = 1; i < hat.values.size(); ++i)
            CHECK(std::abs(hat.values[i]) < 1e-13);
    }
}

TEST_CASE("norm") {
    const Grid g = make_grid(1, {512}, {40.0});
    SUBCASE("zero state") {
        CHECK(norm(WaveFunction(g, 1)) == 0.0);
    }
    SUBCASE("sech profile integrates to 2") {
        WaveFunction psi(g, 1);
        const auto x = axis_coordinates(g, 0);
        for (int i = 0; i < 512; ++i)
            psi.component(0)[i] = 1.0 / std::cosh(x[i]);
        // quadrature oracle: same integrand on a 16x finer grid
        const Grid fine = make_grid(1, {8192}, {40.0});
        const auto xf = axis_coordinates(fine, 0);
        double ref = 0.0;
        for (int i = 0; i < 8192; ++i)
            ref += std::pow(1.0 / std::cosh(xf[i]), 2) * fine.spacing[0];
        CHECK(norm(psi) * norm(psi) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(norm(psi) * norm(psi) == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("component norms add in quadrature") {
        WaveFunction psi(g, 2);
        const double amp = std::sqrt(0.5 / 40.0);
        for (auto& v : psi.values())
            v = amp;
        const auto per = component_norms(psi);
        CHECK(per[0] * per[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(per[1] * per[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("spectral derivatives") {
    const Grid g = make_grid(1, {64}, {13.0});
    const auto x = axis_coordinates(g, 0);

    SUBCASE("plane wave is a laplacian eigenfunction") {
        const double k0 = g.wavenumbers[0][5];
        std::vector<Complex> f(64);
        for (int i = 0; i < 64; ++i)
            f[i] = std::polar(1.0, k0 * x[i]);
        const auto lap = laplacian(g, f);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(lap[i] + k0 * k0 * f[i]) < 1e-12 * k0 * k0);
    }
    SUBCASE("gradient of a constant is zero") {
        std::vector<double> f(64, 3.25);
        const auto grad = gradient_real(g, f);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(grad[0][i]) < 1e-13);
    }
    SUBCASE("sine eigenfunction") {
        std::vector<Complex> f(64);
        const double k = 2.0 * pi / 13.0;
        for (int i = 0; i < 64; ++i)
            f[i] = std::sin(k * x[i]);
        const auto lap = laplacian(g, f);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(lap[i] + k * k * f[i]) <= 1e-12);
    }
    SUBCASE("gradient matches the analytic derivative of a gaussian") {
        const Grid gg = make_grid(1, {128}, {20.0});
        const auto xs = axis_coordinates(gg, 0);
        std::vector<double> f(128);
        for (int i = 0; i < 128; ++i)
            f[i] = std::exp(-xs[i] * xs[i]);
        const auto grad = gradient_real(gg, f);
        for (int i = 0; i < 128; ++i)
            CHECK(grad[0][i] == doctest::Approx(-2.0 * xs[i] * f[i]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Parseval quadrature in 2D") {
    const Grid g = make_grid(2, {16, 16}, {6.0, 7.0});
    const WaveFunction psi = test_support::random_state(g, 1, 99);
    const auto hat = to_spectral(psi);
    CHECK(spectral_norm(hat) == doctest::Approx(norm(psi)).epsilon(1e-12));
}
