#pragma once

#include <string>
#include <vector>

namespace nlsplit {

/// One stage of a splitting product: apply exp(lambda*a*A) first, then
/// exp(lambda*b*B) evaluated on the most recent state. Stage k = 0 acts
/// first. Zero coefficients mean the factor is skipped exactly.
struct SplitStage {
    double a = 0.0;
    double b = 0.0;
};

/// Ordered stage coefficients of an n-th order splitting scheme. Consistency
/// requires sum a_k = sum b_k = 1; shipped even-order schemes are palindromic
/// (the unrolled factor sequence reads the same in both directions).
struct SplittingScheme {
    std::string name;
    int order = 0;
    std::vector<SplitStage> stages;

    double sum_a() const;
    double sum_b() const;
};

/// Second-order scheme: A-half, B-full, A-half.
SplittingScheme strang();

/// Fourth-order scheme with s = 1/(2 - 2^(1/3)); the middle B coefficient
/// 1 - 2s is negative, as any splitting beyond second order requires.
SplittingScheme forest_ruth();

/// Triple-jump composition S(z1*l) S(z0*l) S(z1*l) with
/// z1 = 1/(2 - 2^(1/(n+1))), z0 = 1 - 2*z1, raising a palindromic scheme of
/// even order n to order n+2. Adjacent kinetic factors at the seams are
/// merged. Generated orders beyond 8 are refused; round-off dominates them
/// at double precision.
SplittingScheme compose_higher_order(const SplittingScheme& base);

bool is_palindromic(const SplittingScheme& scheme, double tol = 1e-14);

/// Coefficients of the positive-time-step gradient product
///   exp(l*B/6) exp(l*A/2) exp(l*2*Bt/3) exp(l*A/2) exp(l*B/6)
/// with Bt = B + (l^2/48)[B,[B,A]]. All time-step coefficients are positive.
struct GradientScheme {
    double outer_b = 1.0 / 6.0;
    double inner_a = 1.0 / 2.0;
    double mid_b = 2.0 / 3.0;
    double commutator_weight = 1.0 / 48.0;
};

GradientScheme chin_gradient();

/// Lookup for the splitting names exposed in configs:
/// strang | forest-ruth | order6 | order8. ("chin" selects the gradient
/// scheme and is handled by the propagation config, not here.)
SplittingScheme scheme_by_name(const std::string& name);
std::vector<std::string> scheme_names();

}  // namespace nlsplit
