#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlsplit/grid.hpp"
#include "nlsplit/hamiltonian.hpp"
#include "nlsplit/wavefunction.hpp"

namespace nlsplit::oracle {

/// Dense realization of a linear operator on a small grid. Hermitian
/// operators are exponentiated through a cached eigendecomposition, which
/// keeps exp(-i*lambda*M) exactly unitary for real lambda up to round-off.
class DenseOperator {
  public:
    DenseOperator(Eigen::MatrixXcd m, bool hermitian);

    int size() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    bool hermitian() const { return hermitian_; }

    /// v' = exp(-i * lambda * M) v. Only the Hermitian eigendecomposition
    /// path is provided.
    Eigen::VectorXcd exp_apply(Complex lambda, const Eigen::VectorXcd& v) const;

  private:
    struct EigCache {
        std::once_flag once;
        Eigen::VectorXd eigenvalues;
        Eigen::MatrixXcd eigenvectors;
    };
    const EigCache& eig() const;

    Eigen::MatrixXcd m_;
    bool hermitian_;
    std::shared_ptr<EigCache> cache_;  // shared across copies; the matrix is immutable
};

/// Dense matrix of kappa*(-laplacian) + diag(vext) on a small 1D grid,
/// built from the spectral laplacian so it matches the propagator exactly.
/// `vext` may be empty. Grids above 4096 points are refused.
DenseOperator dense_h0(const Grid& grid, std::span<const double> vext, double kappa);

/// v' = exp(-i*lambda*M) v.
Eigen::VectorXcd dense_exp_apply(const DenseOperator& m, Complex lambda,
                                 const Eigen::VectorXcd& v);

// ---------------------------------------------------------------------------
// Composition-rule evaluation.
//
// The nonlinear operator acts on operator products through nested
// derivatives of exponentially conjugated arguments:
//   Vhat (K1..Kn psi) = i^n d^n/dl1..dln [ V(u) u ],
//   u = exp(-i l1 K1) ... exp(-i ln Kn) psi, evaluated at l = 0,
// where the conjugate argument of V is propagated with exp(+i l K). The
// derivatives are taken by tensor-product central differences with
// Richardson extrapolation over step sizes h and h/2.
// ---------------------------------------------------------------------------

struct ScalarHandle {
    Complex c;
};
struct LinearHandle {
    std::shared_ptr<const DenseOperator> op;
};
struct NonlinearHandle {};

using OperatorHandle = std::variant<ScalarHandle, LinearHandle, NonlinearHandle>;

OperatorHandle scalar_handle(Complex c);
OperatorHandle linear_handle(Eigen::MatrixXcd m, bool hermitian = true);
OperatorHandle linear_handle(std::shared_ptr<const DenseOperator> op);
OperatorHandle nonlinear_handle();

struct VhatResult {
    Eigen::VectorXcd value;
    double error_estimate = 0.0;  // Richardson difference, absolute
};

/// Vhat(K1..Kn psi) for a (possibly multi-component) state stored as
/// component-major blocks of a dense vector. The potential must be Cubic or
/// CoupledCubic (families with a pointwise-phase exponential). Depth n <= 3.
VhatResult vhat_apply(std::span<const OperatorHandle> handles, const Eigen::VectorXcd& psi,
                      int components, const NonlinearPotential& pot, double h = 1e-3);

/// Product K1 K2 ... Kn applied to psi: linear/scalar factors peel off the
/// left, a nonlinear factor dispatches the remaining word to vhat_apply.
Eigen::VectorXcd apply_product(std::span<const OperatorHandle> word,
                               const Eigen::VectorXcd& psi, int components,
                               const NonlinearPotential& pot, double h = 1e-3);

/// Closed-form operator products for the cubic potential, id in 5..15
/// (identity table ids "appeq5".."appeq15"); dense h0 applications.
Eigen::VectorXcd appendix_product(int id, const Eigen::VectorXcd& psi,
                                  const DenseOperator& h0, double g);

/// d^n psi / dt^n at t = 0 for the cubic equation, n in 1..4, assembled from
/// the closed-form operator products.
Eigen::VectorXcd taylor_derivative(int n, const Eigen::VectorXcd& psi,
                                   const DenseOperator& h0, double g);

struct ResidualPoint {
    double t = 0.0;
    double residual = 0.0;
};

/// Residual of the fourth-order Taylor polynomial against a high-order
/// tiny-substep reference propagation; the log-log slope of the curve
/// estimates 5.
std::vector<ResidualPoint> taylor_residual_curve(const Grid& grid, std::span<const double> vext,
                                                 double kappa, double g,
                                                 const WaveFunction& psi,
                                                 std::span<const double> t_list);

/// Least-squares slope of log(residual) vs log(t).
double fitted_slope(std::span<const ResidualPoint> curve);

struct CommutatorReport {
    // quotient fields (action divided by psi where |psi| > 1e-6 * max|psi|)
    std::vector<double> fd_field;
    std::vector<double> paper_field;
    std::vector<double> canonical_field;
    std::vector<std::uint8_t> mask;
    Eigen::VectorXcd fd_action;  // raw [B,[B,A]] psi
    // max-norm deviations of the action vectors, relative to the larger scale
    double rel_dev_paper = 0.0;
    double rel_dev_canonical = 0.0;
    double fd_error_estimate = 0.0;
};

/// [B,[B,A]] psi with B = V_ext + Vhat, A = -laplacian, expanded into the
/// ordered operator products BBA - 2 BAB + ABB (each B split into its linear
/// and nonlinear part) and evaluated through the composition rule. The
/// report compares the measured action against both commutator_field
/// variants.
CommutatorReport fd_double_commutator(const WaveFunction& psi, std::span<const double> vext,
                                      double g, double h = 1e-3);

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

struct IdentityCheck {
    std::string id;
    std::string description;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentitySuiteOptions {
    int points = 32;
    double box = 10.0;
    double g = 1.3;
    std::uint64_t seed = 20240517;
    double tolerance = 1e-5;
    std::vector<std::string> only;  // run just these ids when non-empty
};

std::vector<IdentityCheck> run_identity_suite(const IdentitySuiteOptions& opts = {});

/// Band-limited random state with a reproducible generator (only modes with
/// every alias index <= band_max_alias are populated), unit norm.
WaveFunction random_band_limited_state(const Grid& grid, int components, int band_max_alias,
                                       std::uint64_t seed);

Eigen::VectorXcd to_vector(const WaveFunction& psi);
WaveFunction to_wavefunction(const Eigen::VectorXcd& v, const Grid& grid, int components);

}  // namespace nlsplit::oracle
