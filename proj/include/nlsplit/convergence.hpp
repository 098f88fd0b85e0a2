#pragma once

#include <limits>
#include <span>

#include "nlsplit/propagator.hpp"

namespace nlsplit {

struct Problem {
    Grid grid;
    LinearHamiltonian h0;
    NonlinearPotential potential;
    WaveFunction initial;
};

struct ConvergencePoint {
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;
};

/// Propagate the problem to `final_time` for each dt and measure the l2
/// error against a reference solution of the same problem: an order-6
/// most-recent-update run at dt_ref <= min(dt)/20 (the four-wave-mixing
/// stepper has no higher-order sibling, so its reference is the same stepper
/// at dt_ref <= min(dt)/50). Each dt is rounded to divide final_time
/// exactly. Runs are independent and execute on up to `threads` workers.
ConvergenceResult convergence_study(const Problem& problem, const Stepper& stepper,
                                    std::span<const double> dts, double final_time,
                                    int threads = 1);

/// Least-squares slope of log(error) vs log(dt), restricted to points with
/// error in [err_min, err_max].
double fitted_slope(std::span<const ConvergencePoint> points, double err_min = 0.0,
                    double err_max = std::numeric_limits<double>::infinity());

}  // namespace nlsplit
