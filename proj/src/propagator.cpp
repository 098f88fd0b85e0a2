#include "nlsplit/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsplit/spectral.hpp"

namespace nlsplit {

namespace {

std::vector<Complex> kinetic_phase_table(const Grid& grid, double theta, double kappa) {
    const auto ksq = ksq_field(grid);
    std::vector<Complex> table(ksq.size());
    for (std::size_t i = 0; i < ksq.size(); ++i)
        table[i] = std::polar(1.0, -theta * kappa * ksq[i]);
    return table;
}

void apply_kinetic_table(WaveFunction& psi, const std::vector<Complex>& table) {
    for (int c = 0; c < psi.components(); ++c) {
        auto comp = psi.component(c);
        forward_inplace(psi.grid(), comp);
        for (std::size_t i = 0; i < comp.size(); ++i)
            comp[i] *= table[i];
        inverse_inplace(psi.grid(), comp);
    }
}

void apply_phase_field(WaveFunction& psi, double theta, const std::vector<double>& field,
                       const LinearHamiltonian& h0) {
    const std::size_t n = static_cast<std::size_t>(psi.points());
    for (int c = 0; c < psi.components(); ++c) {
        auto comp = psi.component(c);
        const double* f = field.data() + static_cast<std::size_t>(c) * n;
        const auto vext = h0.external(c);
        if (vext.empty()) {
            for (std::size_t i = 0; i < n; ++i)
                comp[i] *= std::polar(1.0, -theta * f[i]);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                comp[i] *= std::polar(1.0, -theta * (vext[i] + f[i]));
        }
    }
}

double cubic_coupling(const NonlinearPotential& pot, const char* who) {
    const auto* cubic = std::get_if<Cubic>(&pot);
    if (!cubic)
        throw std::invalid_argument(std::string(who) + ": requires a cubic potential");
    return cubic->g;
}

}  // namespace

void apply_kinetic_phase(WaveFunction& psi, double theta, double kappa) {
    if (theta == 0.0)
        return;
    apply_kinetic_table(psi, kinetic_phase_table(psi.grid(), theta, kappa));
}

void apply_potential_phase(WaveFunction& psi, double theta, const LinearHamiltonian& h0,
                           const NonlinearPotential& pot) {
    if (theta == 0.0)
        return;
    apply_phase_field(psi, theta, eval_nonlinear(pot, psi), h0);
}

void apply_mixing_rotation(WaveFunction& psi, double theta, int j, const FourWaveMixing& pot) {
    if (psi.components() != 4)
        throw std::invalid_argument("apply_mixing_rotation: need a 4-component state");
    if (theta == 0.0)
        return;
    const auto c = mixing_coupling_field(pot, psi, j);
    const auto [ia, ib] = mixing_pair(j);
    auto pa = psi.component(ia);
    auto pb = psi.component(ib);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double mag = std::abs(c[i]);
        if (mag == 0.0)
            continue;
        const Complex u = c[i] / mag;
        const double cs = std::cos(theta * mag);
        const double sn = std::sin(theta * mag);
        const Complex a = pa[i];
        const Complex b = pb[i];
        pa[i] = cs * a - Complex{0.0, 1.0} * u * sn * b;
        pb[i] = -Complex{0.0, 1.0} * std::conj(u) * sn * a + cs * b;
    }
}

void step(WaveFunction& psi, const SplittingScheme& scheme, double dt,
          const LinearHamiltonian& h0, const NonlinearPotential& pot) {
    for (const auto& st : scheme.stages) {
        if (st.a != 0.0)
            apply_kinetic_phase(psi, st.a * dt, h0.kinetic_coefficient);
        if (st.b != 0.0)
            apply_potential_phase(psi, st.b * dt, h0, pot);
    }
}

std::vector<double> commutator_field(const Grid& grid, std::span<const double> rho,
                                     std::span<const double> vext, double g,
                                     CommutatorVariant variant,
                                     const ExternalDerivatives* vd) {
    const std::size_t n = static_cast<std::size_t>(grid.total);
    std::vector<double> w(n, 0.0);

    if (g != 0.0) {
        const auto grad_rho = gradient_real(grid, rho);
        const auto lap_rho = laplacian_real(grid, rho);
        for (int d = 0; d < grid.dims; ++d)
            for (std::size_t i = 0; i < n; ++i)
                w[i] += g * g * grad_rho[d][i] * grad_rho[d][i];
        for (std::size_t i = 0; i < n; ++i)
            w[i] += 2.0 * g * g * rho[i] * lap_rho[i];
    }
    if (!vext.empty()) {
        std::array<std::vector<double>, 3> grad_store;
        std::vector<double> lap_store;
        std::array<std::span<const double>, 3> grad_v;
        std::span<const double> lap_v;
        if (vd) {
            grad_v = vd->gradient;
            lap_v = vd->laplacian;
        } else {
            grad_store = gradient_real(grid, vext);
            lap_store = laplacian_real(grid, vext);
            for (int d = 0; d < grid.dims; ++d)
                grad_v[d] = grad_store[d];
            lap_v = lap_store;
        }
        if (g != 0.0)
            for (std::size_t i = 0; i < n; ++i)
                w[i] += 2.0 * g * rho[i] * lap_v[i];
        for (int d = 0; d < grid.dims; ++d)
            for (std::size_t i = 0; i < n; ++i)
                w[i] -= grad_v[d][i] * grad_v[d][i];
    }
    if (variant == CommutatorVariant::canonical)
        for (double& v : w)
            v *= 2.0;
    return w;
}

void chin_step(WaveFunction& psi, double dt, const LinearHamiltonian& h0,
               const NonlinearPotential& pot, CommutatorVariant variant,
               const GradientScheme& gs) {
    const double g = cubic_coupling(pot, "chin_step");
    if (h0.kinetic_coefficient != 1.0)
        throw std::invalid_argument("chin_step: requires kinetic coefficient 1 (hbar = 2m = 1)");
    if (psi.components() != 1)
        throw std::invalid_argument("chin_step: requires a single-component state");

    const Grid& grid = psi.grid();
    const std::size_t n = static_cast<std::size_t>(grid.total);
    const auto vext = h0.external(0);

    apply_potential_phase(psi, gs.outer_b * dt, h0, pot);
    apply_kinetic_phase(psi, gs.inner_a * dt, 1.0);

    {
        // modified midpoint potential: V_ext + g rho - dt^2 * weight * W(rho)
        auto comp = psi.component(0);
        std::vector<double> rho(n);
        for (std::size_t i = 0; i < n; ++i)
            rho[i] = std::norm(comp[i]);
        ExternalDerivatives vd;
        const bool analytic = h0.has_external_derivatives();
        if (analytic) {
            for (int d = 0; d < grid.dims; ++d)
                vd.gradient[d] = std::span(h0.external_gradient[d]).first(n);
            vd.laplacian = std::span(h0.external_laplacian).first(n);
        }
        const auto w = commutator_field(grid, rho, vext, g, variant, analytic ? &vd : nullptr);
        std::vector<double> field(n);
        for (std::size_t i = 0; i < n; ++i)
            field[i] = g * rho[i] - dt * dt * gs.commutator_weight * w[i];
        apply_phase_field(psi, gs.mid_b * dt, field, h0);
    }

    apply_kinetic_phase(psi, gs.inner_a * dt, 1.0);
    apply_potential_phase(psi, gs.outer_b * dt, h0, pot);
}

void fwm_step(WaveFunction& psi, double dt, const LinearHamiltonian& h0,
              const FourWaveMixing& pot) {
    if (psi.components() != 4)
        throw std::invalid_argument("fwm_step: need a 4-component state");
    const NonlinearPotential diag = pot;
    apply_kinetic_phase(psi, 0.5 * dt, h0.kinetic_coefficient);
    apply_potential_phase(psi, 0.5 * dt, h0, diag);
    apply_mixing_rotation(psi, 0.5 * dt, 1, pot);
    apply_mixing_rotation(psi, 0.5 * dt, 2, pot);
    apply_mixing_rotation(psi, 0.5 * dt, 3, pot);
    apply_mixing_rotation(psi, dt, 4, pot);
    apply_mixing_rotation(psi, 0.5 * dt, 3, pot);
    apply_mixing_rotation(psi, 0.5 * dt, 2, pot);
    apply_mixing_rotation(psi, 0.5 * dt, 1, pot);
    apply_potential_phase(psi, 0.5 * dt, h0, diag);
    apply_kinetic_phase(psi, 0.5 * dt, h0.kinetic_coefficient);
}

namespace {

ObservableRecord observe(double t, const WaveFunction& psi, const LinearHamiltonian& h0,
                         const NonlinearPotential& pot, bool with_energy) {
    ObservableRecord rec;
    rec.time = t;
    rec.norm_per_component = component_norms(psi);
    double s = 0.0;
    for (double v : rec.norm_per_component)
        s += v * v;
    rec.norm_total = std::sqrt(s);
    if (with_energy)
        rec.energy = energy(psi, h0, pot);
    return rec;
}

}  // namespace

std::vector<ObservableRecord> propagate(WaveFunction& psi, const PropagationConfig& config,
                                        const LinearHamiltonian& h0,
                                        const NonlinearPotential& pot,
                                        const Observer& observer) {
    if (!(config.dt > 0.0))
        throw std::invalid_argument("propagate: dt must be positive");
    if (config.n_steps < 0)
        throw std::invalid_argument("propagate: n_steps must be non-negative");
    if (config.observe_every < 1)
        throw std::invalid_argument("propagate: observe_every must be positive");

    const Stepper& stepper = config.stepper;
    const bool with_energy = energy_defined(pot);
    const FourWaveMixing* fwm = std::get_if<FourWaveMixing>(&pot);
    if (stepper.kind == Stepper::Kind::fwm && !fwm)
        throw std::invalid_argument("propagate: fwm stepping needs a four-wave-mixing potential");

    // kinetic phase tables are fixed across steps; build them once
    std::vector<std::vector<Complex>> tables;
    if (stepper.kind == Stepper::Kind::split) {
        for (const auto& st : stepper.scheme.stages)
            tables.push_back(st.a != 0.0 ? kinetic_phase_table(psi.grid(), st.a * config.dt,
                                                               h0.kinetic_coefficient)
                                         : std::vector<Complex>{});
    }

    std::vector<ObservableRecord> records;
    auto emit = [&](double t) {
        records.push_back(observe(t, psi, h0, pot, with_energy));
        if (observer)
            observer(records.back());
    };

    emit(0.0);
    for (std::int64_t s = 1; s <= config.n_steps; ++s) {
        switch (stepper.kind) {
            case Stepper::Kind::split:
                for (std::size_t k = 0; k < stepper.scheme.stages.size(); ++k) {
                    const auto& st = stepper.scheme.stages[k];
                    if (st.a != 0.0)
                        apply_kinetic_table(psi, tables[k]);
                    if (st.b != 0.0)
                        apply_potential_phase(psi, st.b * config.dt, h0, pot);
                }
                break;
            case Stepper::Kind::chin:
                chin_step(psi, config.dt, h0, pot, stepper.variant, stepper.gradient);
                break;
            case Stepper::Kind::fwm:
                fwm_step(psi, config.dt, h0, *fwm);
                break;
        }
        if (!all_finite(psi))
            throw propagation_error("propagate: non-finite amplitude at step " +
                                        std::to_string(s),
                                    s, max_abs(psi));
        if (s % config.observe_every == 0 || s == config.n_steps)
            emit(s * config.dt);
    }
    return records;
}

}  // namespace nlsplit
