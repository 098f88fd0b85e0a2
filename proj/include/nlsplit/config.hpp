#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsplit/convergence.hpp"
#include "nlsplit/propagator.hpp"

namespace nlsplit {

class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parsed run description. The grammar is flat key = value text grouped by
/// [section] headers; '#' starts a comment. See README for the full key
/// reference. Parsing keeps everything verbatim enough that
/// parse_config(to_text(c)) reproduces the identical run plan.
struct RunConfig {
    // [grid]
    int dims = 1;
    std::vector<int> points{64};
    std::vector<double> lengths{10.0};
    double kappa = 1.0;

    // [potential]  family: none | cubic | coupled-cubic | four-wave-mixing
    std::string potential_family = "none";
    double g = 0.0;
    std::vector<std::vector<double>> coupling_rows;   // coupled-cubic
    std::vector<std::vector<double>> phase_mod_rows;  // four-wave-mixing

    // [external]  specs: none | harmonic OMEGA | constant VALUE | table PATH
    std::string external_shared = "none";
    std::vector<std::string> external_per_component;  // overrides, may be empty strings

    // [initial]  specs: gaussian X0 SIGMA K0 | sech X0 WIDTH K0 |
    //            oscillator-ground OMEGA | uniform AMPLITUDE | snapshot PATH
    int components = 1;
    std::vector<std::string> initial_specs{"gaussian 0 1 0"};
    bool normalize = false;

    // [propagation]
    std::string scheme = "strang";
    double dt = 1e-3;
    std::int64_t n_steps = 100;
    std::int64_t observe_every = 1;
    std::string commutator_variant = "paper";

    // [output]
    std::string observables_path;
    std::string snapshot_final;
    std::string snapshot_prefix;
    std::int64_t snapshot_every = 0;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string to_text(const RunConfig& config);

/// Everything needed to execute the run.
struct ResolvedRun {
    Problem problem;
    PropagationConfig prop;
    std::string observables_path;
    std::string snapshot_final;
    std::string snapshot_prefix;
    std::int64_t snapshot_every = 0;
};

ResolvedRun build_run(const RunConfig& config);

/// Built-in demo configurations: soliton | trap | fwm | chin.
RunConfig demo_config(const std::string& name);
std::vector<std::string> demo_names();

/// Deterministic CSV serialization of observable records
/// (columns: time, norm_total, norm_c0.., energy; %.17g formatting).
std::string observables_csv(const std::vector<ObservableRecord>& records);

}  // namespace nlsplit
