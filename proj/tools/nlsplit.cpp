// Command-line front end: configuration-driven propagation runs, convergence
// studies, the verification suite and snapshot inspection.

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nlsplit/config.hpp"
#include "nlsplit/convergence.hpp"
#include "nlsplit/oracle.hpp"
#include "nlsplit/snapshot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

int thread_count_from_env() {
    if (const char* env = std::getenv("NLSPLIT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    return 1;
}

std::string snapshot_name(const std::string& prefix, std::int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%08lld.nlsp", static_cast<long long>(step));
    return prefix + buf;
}

int cmd_run(const std::string& config_path, bool quiet) {
    std::optional<nlsplit::ResolvedRun> maybe_run;
    try {
        maybe_run = nlsplit::build_run(nlsplit::parse_config_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    nlsplit::ResolvedRun& run = *maybe_run;

    try {
        nlsplit::WaveFunction psi = run.problem.initial;
        std::int64_t step = 0;
        std::vector<nlsplit::ObservableRecord> records;
        auto observer = [&](const nlsplit::ObservableRecord& rec) {
            if (!quiet)
                std::cout << "t = " << rec.time << "  norm = " << rec.norm_total
                          << (rec.energy ? "  energy = " + std::to_string(*rec.energy) : "")
                          << "\n";
            if (run.snapshot_every > 0 && !run.snapshot_prefix.empty()) {
                if (step % run.snapshot_every == 0)
                    nlsplit::write_snapshot(snapshot_name(run.snapshot_prefix, step), psi);
            }
            ++step;
        };
        records = nlsplit::propagate(psi, run.prop, run.problem.h0, run.problem.potential,
                                     observer);
        if (!run.observables_path.empty()) {
            std::ofstream os(run.observables_path, std::ios::trunc);
            os << nlsplit::observables_csv(records);
            if (!os)
                throw std::runtime_error("cannot write observables to '" +
                                         run.observables_path + "'");
        }
        if (!run.snapshot_final.empty())
            nlsplit::write_snapshot(run.snapshot_final, psi);
        if (!quiet)
            std::cout << "done: " << run.prop.n_steps << " steps, final norm "
                      << nlsplit::norm(psi) << "\n";
        return kExitOk;
    } catch (const nlsplit::propagation_error& e) {
        std::cerr << "numerical failure: " << e.what() << " (step " << e.step_index()
                  << ", max amplitude " << e.max_amplitude() << ")\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_converge(const std::string& config_path, std::vector<double> dts, double final_time) {
    std::optional<nlsplit::ResolvedRun> maybe_run;
    try {
        maybe_run = nlsplit::build_run(nlsplit::parse_config_file(config_path));
        if (dts.size() < 4)
            throw nlsplit::config_error("converge needs at least 4 dt values");
        const auto [lo, hi] = std::minmax_element(dts.begin(), dts.end());
        if (*hi / *lo < 31.62)  // 1.5 decades
            throw nlsplit::config_error("converge needs dt values spanning at least "
                                        "1.5 decades");
        if (final_time <= 0.0)
            final_time = maybe_run->prop.dt * static_cast<double>(maybe_run->prop.n_steps);
        if (final_time <= 0.0)
            throw nlsplit::config_error("final time must be positive (set n_steps*dt or "
                                        "--final-time)");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    nlsplit::ResolvedRun& run = *maybe_run;

    try {
        const auto result = nlsplit::convergence_study(run.problem, run.prop.stepper, dts,
                                                       final_time, thread_count_from_env());
        std::printf("# T = %.17g, reference: %s\n", final_time,
                    run.prop.stepper.kind == nlsplit::Stepper::Kind::fwm
                        ? "same stepper, dt_min/50"
                        : "order6, dt_min/20");
        std::printf("%-14s %-14s\n", "dt", "error");
        for (const auto& p : result.points)
            std::printf("%-14.6g %-14.6g\n", p.dt, p.error);
        std::printf("fitted slope: %.3f\n", result.slope);
        return kExitOk;
    } catch (const nlsplit::propagation_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_oracle_verify(int points, double tolerance, const std::vector<std::string>& only,
                      const std::string& csv_path, std::uint64_t seed) {
    try {
        nlsplit::oracle::IdentitySuiteOptions opts;
        opts.points = points;
        opts.tolerance = tolerance;
        opts.only = only;
        opts.seed = seed;
        const auto rows = nlsplit::oracle::run_identity_suite(opts);
        if (rows.empty()) {
            std::cerr << "no identities selected\n";
            return kExitUsage;
        }

        bool all_pass = true;
        std::printf("%-14s %-40s %-6s %-12s %-12s %s\n", "id", "identity", "grid", "measured",
                    "tolerance", "status");
        for (const auto& r : rows) {
            all_pass = all_pass && r.pass;
            std::printf("%-14s %-40s %-6d %-12.3e %-12.3e %s\n", r.id.c_str(),
                        r.description.c_str(), points, r.measured, r.tolerance,
                        r.pass ? "pass" : "FAIL");
        }

        if (only.empty()) {
            // informational: which commutator-field variant the measured
            // double commutator supports
            const auto grid = nlsplit::make_grid(1, {points}, {10.0});
            std::vector<double> vext(static_cast<std::size_t>(grid.total));
            const auto x = nlsplit::axis_coordinates(grid, 0);
            for (std::size_t i = 0; i < vext.size(); ++i)
                vext[i] = 0.4 * std::cos(2.0 * M_PI * x[i] / 10.0);
            const auto psi = nlsplit::oracle::random_band_limited_state(
                grid, 1, std::max(2, points / 10), seed + 7);
            const auto rep = nlsplit::oracle::fd_double_commutator(psi, vext, 1.0);
            std::printf("\ndouble commutator [B,[B,A]] vs closed-form fields "
                        "(max relative deviation):\n");
            std::printf("  paper variant:     %.3e\n", rep.rel_dev_paper);
            std::printf("  canonical variant: %.3e\n", rep.rel_dev_canonical);
            std::printf("  matching variant:  %s\n",
                        rep.rel_dev_canonical < rep.rel_dev_paper ? "canonical" : "paper");
        }

        if (!csv_path.empty()) {
            std::ofstream os(csv_path, std::ios::trunc);
            os << "id,identity,grid,measured,tolerance,status\n";
            for (const auto& r : rows)
                os << r.id << ",\"" << r.description << "\"," << points << "," << r.measured
                   << "," << r.tolerance << "," << (r.pass ? "pass" : "fail") << "\n";
        }
        return all_pass ? kExitOk : kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_inspect(const std::string& path) {
    try {
        const auto info = nlsplit::inspect_snapshot(path);
        std::printf("snapshot: %s\n", path.c_str());
        std::printf("dims: %d\n", info.grid.dims);
        std::printf("points:");
        for (int d = 0; d < info.grid.dims; ++d)
            std::printf(" %d", info.grid.points[d]);
        std::printf("\nlengths:");
        for (int d = 0; d < info.grid.dims; ++d)
            std::printf(" %.17g", info.grid.lengths[d]);
        std::printf("\ncomponents: %d\n", info.components);
        std::printf("norm_total: %.17g\n", info.norm_total);
        for (std::size_t c = 0; c < info.norm_per_component.size(); ++c)
            std::printf("norm_c%zu: %.17g\n", c, info.norm_per_component[c]);
        std::printf("density_min: %.17g\ndensity_max: %.17g\n", info.min_density,
                    info.max_density);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_demo(const std::string& name, const std::string& dir) {
    try {
        const auto config = nlsplit::demo_config(name);
        std::filesystem::create_directories(dir);
        const auto cwd = std::filesystem::current_path();
        std::filesystem::current_path(dir);
        const std::string config_path = name + ".conf";
        {
            std::ofstream os(config_path, std::ios::trunc);
            os << nlsplit::to_text(config);
        }
        std::cout << "wrote " << dir << "/" << config_path << "\n";
        const int rc = cmd_run(config_path, false);
        std::filesystem::current_path(cwd);
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral split-operator propagation of nonlinear Schrodinger equations"};
    app.require_subcommand(1);

    std::string config_path;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "propagate a configured problem");
    run->add_option("--config", config_path, "config file")->required();
    run->add_flag("--quiet", quiet, "suppress progress output");

    std::vector<double> dts;
    double final_time = 0.0;
    auto* conv = app.add_subcommand("converge", "empirical convergence order study");
    conv->add_option("--config", config_path, "config file")->required();
    conv->add_option("--dt", dts, "time steps (>= 4 values spanning >= 1.5 decades)")
        ->required()
        ->delimiter(',');
    conv->add_option("--final-time", final_time,
                     "propagation horizon (default: dt * n_steps from the config)");

    int points = 32;
    double tolerance = 1e-5;
    std::vector<std::string> only;
    std::string csv_path;
    std::uint64_t seed = 20240517;
    auto* verify = app.add_subcommand("oracle-verify", "run the operator identity suite");
    verify->add_option("--points", points, "1D grid size (<= 4096)");
    verify->add_option("--tolerance", tolerance, "pass threshold for each identity");
    verify->add_option("--only", only, "run just these identity ids")->delimiter(',');
    verify->add_option("--csv", csv_path, "also write the table as CSV");
    verify->add_option("--seed", seed, "random state seed");

    std::string snapshot_path;
    auto* inspect = app.add_subcommand("inspect", "summarize a snapshot file");
    inspect->add_option("path", snapshot_path, "snapshot file")->required();

    std::string demo_name;
    std::string demo_dir = "demo-output";
    auto* demo = app.add_subcommand("demo", "write and run a built-in scenario");
    demo->add_option("name", demo_name, "soliton | trap | fwm | chin")->required();
    demo->add_option("--dir", demo_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed())
        return cmd_run(config_path, quiet);
    if (conv->parsed())
        return cmd_converge(config_path, dts, final_time);
    if (verify->parsed())
        return cmd_oracle_verify(points, tolerance, only, csv_path, seed);
    if (inspect->parsed())
        return cmd_inspect(snapshot_path);
    if (demo->parsed())
        return cmd_demo(demo_name, demo_dir);
    return kExitUsage;
}
