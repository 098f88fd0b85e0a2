#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsplit/hamiltonian.hpp"
#include "nlsplit/schemes.hpp"
#include "nlsplit/wavefunction.hpp"

namespace nlsplit {

/// Source of the double-commutator field used by the gradient step.
/// `paper` keeps the field exactly as printed in the reference derivation
/// this library follows; `canonical` is the field the dense/finite-difference
/// oracle measures for [B,[B,A]] (numerically twice the former). The oracle
/// arbitrates which one yields a clean fourth-order step.
enum class CommutatorVariant { paper, canonical };

struct ObservableRecord {
    double time = 0.0;
    double norm_total = 0.0;
    std::vector<double> norm_per_component;
    std::optional<double> energy;
};

/// Resolved stepping strategy.
struct Stepper {
    enum class Kind { split, chin, fwm };
    Kind kind = Kind::split;
    SplittingScheme scheme;  // kind == split
    GradientScheme gradient;  // kind == chin
    CommutatorVariant variant = CommutatorVariant::paper;
};

struct PropagationConfig {
    double dt = 0.0;
    std::int64_t n_steps = 0;
    Stepper stepper;
    std::int64_t observe_every = 1;
};

class propagation_error : public std::runtime_error {
  public:
    propagation_error(const std::string& what, std::int64_t step, double max_amplitude)
        : std::runtime_error(what), step_(step), max_amplitude_(max_amplitude) {}
    std::int64_t step_index() const { return step_; }
    double max_amplitude() const { return max_amplitude_; }

  private:
    std::int64_t step_;
    double max_amplitude_;
};

/// psi <- exp(-i * theta * kappa * k^2) psi per component, applied in
/// spectral space; exactly norm-preserving up to round-off.
void apply_kinetic_phase(WaveFunction& psi, double theta, double kappa);

/// psi <- exp(-i * theta * (V_ext + V_nl(psi))) psi pointwise, the nonlinear
/// field evaluated on the current state. A pointwise phase leaves every
/// density invariant, so this is the exact exponential of the diagonal
/// potential factor.
void apply_potential_phase(WaveFunction& psi, double theta, const LinearHamiltonian& h0,
                           const NonlinearPotential& pot);

/// Pairwise rotation exp(-i*theta*V_j), j in 1..4, between the two components
/// coupled by the mixing term V_j; rotation angle theta*|c| with c the
/// coupling field. The two spectator components are untouched and where
/// c = 0 the map is the identity.
void apply_mixing_rotation(WaveFunction& psi, double theta, int j, const FourWaveMixing& pot);

/// One composite step of the splitting scheme with the most-recent-update
/// rule: every potential factor is evaluated on the latest intermediate
/// state. One-step error O(dt^(order+1)).
void step(WaveFunction& psi, const SplittingScheme& scheme, double dt,
          const LinearHamiltonian& h0, const NonlinearPotential& pot);

/// Precomputed grad V and lap V of an external potential (one component).
struct ExternalDerivatives {
    std::array<std::span<const double>, 3> gradient;
    std::span<const double> laplacian;
};

/// The commutator field W with [B,[B,A]] -> W(x) for B = V_ext + g*rho,
/// A = -laplacian (kappa = 1):
///   paper:     g^2 (grad rho)^2 + 2 g^2 rho lap rho + 2 g rho lap V - (grad V)^2
///   canonical: twice the above (the value the oracle measures).
/// The density derivatives are spectral (rho is periodic-smooth whenever the
/// state is confined). The external-potential derivatives come from
/// `vd` when given; otherwise they are taken spectrally, which is only
/// faithful for potentials smooth across the box seam.
std::vector<double> commutator_field(const Grid& grid, std::span<const double> rho,
                                     std::span<const double> vext, double g,
                                     CommutatorVariant variant,
                                     const ExternalDerivatives* vd = nullptr);

/// One step of the positive-time-step gradient product
///   B(dt/6) A(dt/2) Bt(2dt/3) A(dt/2) B(dt/6)
/// with Bt-field = V_ext + g*rho - (dt^2/48) * W and most-recent-update
/// evaluation of every potential factor. Requires a Cubic potential, a
/// single-component state and kappa = 1.
void chin_step(WaveFunction& psi, double dt, const LinearHamiltonian& h0,
               const NonlinearPotential& pot, CommutatorVariant variant,
               const GradientScheme& gs = chin_gradient());

/// Second-order palindromic step for the four-wave-mixing system:
/// kinetic and diagonal halves wrap the nested rotation product
/// V1(dt/2) V2(dt/2) V3(dt/2) V4(dt) V3(dt/2) V2(dt/2) V1(dt/2).
void fwm_step(WaveFunction& psi, double dt, const LinearHamiltonian& h0,
              const FourWaveMixing& pot);

using Observer = std::function<void(const ObservableRecord&)>;

/// Repeated composite steps with observable recording at the configured
/// cadence (state at t = 0 and the final state are always recorded).
/// Non-finite amplitudes abort with the failing step index.
std::vector<ObservableRecord> propagate(WaveFunction& psi, const PropagationConfig& config,
                                        const LinearHamiltonian& h0,
                                        const NonlinearPotential& pot,
                                        const Observer& observer = {});

}  // namespace nlsplit
