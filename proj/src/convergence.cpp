#include "nlsplit/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>

namespace nlsplit {

namespace {

WaveFunction run_to(const Problem& problem, const Stepper& stepper, double dt, double T) {
    const auto n = std::max<std::int64_t>(1, std::llround(T / dt));
    PropagationConfig cfg;
    cfg.dt = T / static_cast<double>(n);
    cfg.n_steps = n;
    cfg.observe_every = n;
    cfg.stepper = stepper;
    WaveFunction psi = problem.initial;
    propagate(psi, cfg, problem.h0, problem.potential);
    return psi;
}

double l2_difference(const WaveFunction& a, const WaveFunction& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        s += std::norm(a.values()[i] - b.values()[i]);
    return std::sqrt(s * a.grid().cell_volume);
}

}  // namespace

ConvergenceResult convergence_study(const Problem& problem, const Stepper& stepper,
                                    std::span<const double> dts, double final_time,
                                    int threads) {
    if (dts.empty())
        throw std::invalid_argument("convergence_study: need at least one dt");
    if (!(final_time > 0.0))
        throw std::invalid_argument("convergence_study: final time must be positive");
    for (double dt : dts)
        if (!(dt > 0.0) || dt > final_time)
            throw std::invalid_argument("convergence_study: dt values must lie in (0, T]");

    const double dt_min = *std::min_element(dts.begin(), dts.end());

    Stepper ref_stepper = stepper;
    double ref_dt = dt_min / 20.0;
    if (stepper.kind == Stepper::Kind::fwm) {
        ref_dt = dt_min / 50.0;  // second-order reference needs a larger margin
    } else {
        ref_stepper.kind = Stepper::Kind::split;
        ref_stepper.scheme = scheme_by_name("order6");
    }
    const WaveFunction reference = run_to(problem, ref_stepper, ref_dt, final_time);

    ConvergenceResult result;
    result.points.resize(dts.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= dts.size())
                return;
            const WaveFunction psi = run_to(problem, stepper, dts[i], final_time);
            result.points[i] = {dts[i], l2_difference(psi, reference)};
        }
    };

    const int n_workers = std::clamp<int>(threads, 1, static_cast<int>(dts.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::future<void>> futs;
        for (int i = 0; i < n_workers; ++i)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs)
            f.get();
    }

    result.slope = fitted_slope(result.points);
    return result;
}

double fitted_slope(std::span<const ConvergencePoint> points, double err_min, double err_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : points) {
        if (!(p.error > 0.0) || p.error < err_min || p.error > err_max)
            continue;
        const double x = std::log(p.dt), y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        throw std::invalid_argument("fitted_slope: need at least two usable points");
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw std::invalid_argument("fitted_slope: degenerate fit");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace nlsplit
