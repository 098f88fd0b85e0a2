#pragma once

#include <array>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "nlsplit/grid.hpp"
#include "nlsplit/wavefunction.hpp"

namespace nlsplit {

/// Linear part of the Hamiltonian: kappa*(-laplacian) plus a real external
/// potential per component. Units follow hbar = 2m = 1, so kappa defaults
/// to 1. The external potential buffer holds components*total values
/// (component-major); an empty buffer means zero potential.
///
/// The optional derivative tables carry grad V and lap V per component for
/// potentials whose derivatives are known in closed form. Trap potentials
/// are generally not periodic across the box seam, so deriving them
/// spectrally rings; consumers that need derivatives (the gradient step)
/// use these tables when present and fall back to spectral differentiation
/// otherwise.
struct LinearHamiltonian {
    double kinetic_coefficient = 1.0;
    int components = 1;
    std::vector<double> external_potential;
    std::array<std::vector<double>, 3> external_gradient;
    std::vector<double> external_laplacian;

    std::span<const double> external(int c) const;
    bool has_external_derivatives() const { return !external_laplacian.empty(); }
};

LinearHamiltonian make_hamiltonian(const Grid& grid, int components, double kappa,
                                   std::vector<double> external_potential = {});

/// kappa*(-laplacian) + 0.5*omega^2*|x|^2 on every component, with the
/// analytic derivative tables filled in.
LinearHamiltonian make_harmonic_hamiltonian(const Grid& grid, int components, double kappa,
                                            double omega);

/// V(psi) = g * |psi|^2, with |psi|^2 the total density summed over components.
struct Cubic {
    double g = 0.0;
};

/// Component j sees sum_k g[j][k] * |phi_k|^2.
struct CoupledCubic {
    int components = 2;
    std::vector<double> couplings;  // row-major components x components

    double coupling(int j, int k) const;
    bool symmetric(double tol = 0.0) const;
};

/// Four-component resonant mixing. The diagonal (phase-modulation) part is a
/// CoupledCubic-style matrix; the mixing part splits into four pairwise
/// rotations V_1..V_4 whose coupling fields are
///   V_1: c = g conj(phi_1) phi_3   rotating components (0, 2)
///   V_2: c = g conj(phi_1) phi_2   rotating components (0, 3)
///   V_3: c = g conj(phi_0) phi_3   rotating components (1, 2)
///   V_4: c = g conj(phi_0) phi_2   rotating components (1, 3)
/// so that V_1+V_2 acting on phi_0 reproduces the 2g conj(phi_1) phi_2 phi_3
/// mixing term, and cyclically for the others.
struct FourWaveMixing {
    double g = 0.0;
    std::array<std::array<double, 4>, 4> phase_mod{};  // diagonal U_j couplings
};

/// Arbitrary local diagonal potential; f maps the C complex amplitudes at one
/// point to C real potential values. Well-behaved potentials must depend on
/// the amplitudes only through their densities — check_phase_invariance is
/// the verifier, not the type system.
struct CustomLocal {
    int components = 1;
    std::function<void(std::span<const Complex>, std::span<double>)> f;
};

using NonlinearPotential = std::variant<Cubic, CoupledCubic, FourWaveMixing, CustomLocal>;

/// Component count the potential requires; 0 means any.
int potential_components(const NonlinearPotential& pot);

/// The local diagonal potential field per component (components*total values),
/// i.e. the multiplier that realizes the potential's action on psi. For
/// FourWaveMixing this is the phase-modulation diagonal only.
std::vector<double> eval_nonlinear(const NonlinearPotential& pot, const WaveFunction& psi);

/// Pairwise coupling field c of the mixing term V_j, j in 1..4.
std::vector<Complex> mixing_coupling_field(const FourWaveMixing& pot,
                                           const WaveFunction& psi, int j);
std::pair<int, int> mixing_pair(int j);

/// max |V(e^{i theta} psi) - V(psi)| over all points, components and (for
/// four-wave mixing) coupling fields. Zero for any potential that depends on
/// densities only.
double check_phase_invariance(const NonlinearPotential& pot, const WaveFunction& psi,
                              double theta);

/// Total energy functional: spectral kinetic + external + interaction.
/// Defined for Cubic, symmetric CoupledCubic and symmetric-phase-mod
/// FourWaveMixing; throws otherwise.
double energy(const WaveFunction& psi, const LinearHamiltonian& h0,
              const NonlinearPotential& pot);
bool energy_defined(const NonlinearPotential& pot);

}  // namespace nlsplit
