#include "nlsplit/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "nlsplit/snapshot.hpp"

namespace nlsplit {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

double to_double(const std::string& s, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "': expected a number, got '" + s + "'");
    }
}

std::int64_t to_int(const std::string& s, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "': expected an integer, got '" + s + "'");
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using Section = std::map<std::string, Entry>;

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    {
        std::istringstream is(text);
        std::string raw;
        std::string current;
        int line = 0;
        while (std::getline(is, raw)) {
            ++line;
            const auto hash = raw.find('#');
            if (hash != std::string::npos)
                raw.erase(hash);
            const std::string s = trim(raw);
            if (s.empty())
                continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw config_error("line " + std::to_string(line) +
                                       ": malformed section header '" + s + "'");
                current = trim(s.substr(1, s.size() - 2));
                if (current.empty())
                    throw config_error("line " + std::to_string(line) + ": empty section name");
                section_lines.emplace(current, line);
                sections[current];
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw config_error("line " + std::to_string(line) +
                                   ": expected 'key = value', got '" + s + "'");
            if (current.empty())
                throw config_error("line " + std::to_string(line) +
                                   ": key outside of any [section]");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw config_error("line " + std::to_string(line) + ": empty key");
            if (!sections[current].emplace(key, Entry{value, line}).second)
                throw config_error("line " + std::to_string(line) + ": duplicate key '" + key +
                                   "' in [" + current + "]");
        }
    }

    const std::set<std::string> known_sections{"grid", "potential", "external",
                                               "initial", "propagation", "output"};
    for (const auto& [name, _] : sections)
        if (!known_sections.count(name))
            throw config_error("line " + std::to_string(section_lines[name]) +
                               ": unknown section [" + name + "]");

    RunConfig c;
    auto section = [&](const char* name) -> const Section* {
        const auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };
    auto get = [&](const Section* sec, const std::string& key) -> const Entry* {
        if (!sec)
            return nullptr;
        const auto it = sec->find(key);
        if (it == sec->end())
            return nullptr;
        it->second.used = true;
        return &it->second;
    };

    if (const Section* s = section("grid")) {
        if (const Entry* e = get(s, "dims"))
            c.dims = static_cast<int>(to_int(e->value, e->line, "dims"));
        if (const Entry* e = get(s, "points")) {
            c.points.clear();
            for (const auto& t : split_ws(e->value))
                c.points.push_back(static_cast<int>(to_int(t, e->line, "points")));
        }
        if (const Entry* e = get(s, "lengths")) {
            c.lengths.clear();
            for (const auto& t : split_ws(e->value))
                c.lengths.push_back(to_double(t, e->line, "lengths"));
        }
        if (const Entry* e = get(s, "kappa"))
            c.kappa = to_double(e->value, e->line, "kappa");
    }

    if (const Section* s = section("potential")) {
        if (const Entry* e = get(s, "family"))
            c.potential_family = e->value;
        if (const Entry* e = get(s, "g"))
            c.g = to_double(e->value, e->line, "g");
        for (int r = 0;; ++r) {
            const Entry* e = get(s, "g_row" + std::to_string(r));
            if (!e)
                break;
            std::vector<double> row;
            for (const auto& t : split_ws(e->value))
                row.push_back(to_double(t, e->line, "g_row"));
            c.coupling_rows.push_back(std::move(row));
        }
        for (int r = 0;; ++r) {
            const Entry* e = get(s, "phase_mod_row" + std::to_string(r));
            if (!e)
                break;
            std::vector<double> row;
            for (const auto& t : split_ws(e->value))
                row.push_back(to_double(t, e->line, "phase_mod_row"));
            c.phase_mod_rows.push_back(std::move(row));
        }
    }

    if (const Section* s = section("external")) {
        if (const Entry* e = get(s, "shared"))
            c.external_shared = e->value;
        for (int r = 0;; ++r) {
            const Entry* e = get(s, "component" + std::to_string(r));
            if (!e)
                break;
            c.external_per_component.push_back(e->value);
        }
    }

    if (const Section* s = section("initial")) {
        if (const Entry* e = get(s, "components"))
            c.components = static_cast<int>(to_int(e->value, e->line, "components"));
        if (const Entry* e = get(s, "state")) {
            c.initial_specs = {e->value};
        } else {
            std::vector<std::string> specs;
            for (int r = 0;; ++r) {
                const Entry* e2 = get(s, "state" + std::to_string(r));
                if (!e2)
                    break;
                specs.push_back(e2->value);
            }
            if (!specs.empty())
                c.initial_specs = std::move(specs);
        }
        if (const Entry* e = get(s, "normalize"))
            c.normalize = to_int(e->value, e->line, "normalize") != 0;
    }

    if (const Section* s = section("propagation")) {
        if (const Entry* e = get(s, "scheme"))
            c.scheme = e->value;
        if (const Entry* e = get(s, "dt"))
            c.dt = to_double(e->value, e->line, "dt");
        if (const Entry* e = get(s, "n_steps"))
            c.n_steps = to_int(e->value, e->line, "n_steps");
        if (const Entry* e = get(s, "observe_every"))
            c.observe_every = to_int(e->value, e->line, "observe_every");
        if (const Entry* e = get(s, "commutator_variant"))
            c.commutator_variant = e->value;
    }

    if (const Section* s = section("output")) {
        if (const Entry* e = get(s, "observables"))
            c.observables_path = e->value;
        if (const Entry* e = get(s, "snapshot_final"))
            c.snapshot_final = e->value;
        if (const Entry* e = get(s, "snapshot_prefix"))
            c.snapshot_prefix = e->value;
        if (const Entry* e = get(s, "snapshot_every"))
            c.snapshot_every = to_int(e->value, e->line, "snapshot_every");
    }

    for (const auto& [name, sec] : sections)
        for (const auto& [key, entry] : sec)
            if (!entry.used)
                throw config_error("line " + std::to_string(entry.line) + ": unknown key '" +
                                   key + "' in [" + name + "]");

    // infer the component count when it was left implicit
    int inferred = static_cast<int>(c.initial_specs.size());
    if (c.potential_family == "four-wave-mixing")
        inferred = 4;
    else if (c.potential_family == "coupled-cubic" && !c.coupling_rows.empty())
        inferred = static_cast<int>(c.coupling_rows.size());
    if (c.components == 1 && inferred > 1)
        c.components = inferred;

    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "dims = " << c.dims << "\n";
    os << "points =";
    for (int p : c.points)
        os << " " << p;
    os << "\nlengths =";
    for (double l : c.lengths)
        os << " " << fmt(l);
    os << "\nkappa = " << fmt(c.kappa) << "\n";

    os << "\n[potential]\n";
    os << "family = " << c.potential_family << "\n";
    os << "g = " << fmt(c.g) << "\n";
    for (std::size_t r = 0; r < c.coupling_rows.size(); ++r) {
        os << "g_row" << r << " =";
        for (double v : c.coupling_rows[r])
            os << " " << fmt(v);
        os << "\n";
    }
    for (std::size_t r = 0; r < c.phase_mod_rows.size(); ++r) {
        os << "phase_mod_row" << r << " =";
        for (double v : c.phase_mod_rows[r])
            os << " " << fmt(v);
        os << "\n";
    }

    os << "\n[external]\n";
    os << "shared = " << c.external_shared << "\n";
    for (std::size_t r = 0; r < c.external_per_component.size(); ++r)
        os << "component" << r << " = " << c.external_per_component[r] << "\n";

    os << "\n[initial]\n";
    os << "components = " << c.components << "\n";
    if (c.initial_specs.size() == 1) {
        os << "state = " << c.initial_specs[0] << "\n";
    } else {
        for (std::size_t r = 0; r < c.initial_specs.size(); ++r)
            os << "state" << r << " = " << c.initial_specs[r] << "\n";
    }
    os << "normalize = " << (c.normalize ? 1 : 0) << "\n";

    os << "\n[propagation]\n";
    os << "scheme = " << c.scheme << "\n";
    os << "dt = " << fmt(c.dt) << "\n";
    os << "n_steps = " << c.n_steps << "\n";
    os << "observe_every = " << c.observe_every << "\n";
    os << "commutator_variant = " << c.commutator_variant << "\n";

    os << "\n[output]\n";
    if (!c.observables_path.empty())
        os << "observables = " << c.observables_path << "\n";
    if (!c.snapshot_final.empty())
        os << "snapshot_final = " << c.snapshot_final << "\n";
    if (!c.snapshot_prefix.empty())
        os << "snapshot_prefix = " << c.snapshot_prefix << "\n";
    os << "snapshot_every = " << c.snapshot_every << "\n";
    return os.str();
}

namespace {

struct ExternalField {
    std::vector<double> values;
    std::array<std::vector<double>, 3> gradient;
    std::vector<double> laplacian;
    bool has_derivatives = false;
};

ExternalField resolve_external(const std::string& spec, const Grid& grid,
                               int component_for_table) {
    const std::size_t n = static_cast<std::size_t>(grid.total);
    ExternalField out;
    const auto toks = split_ws(spec);
    auto zero_derivatives = [&] {
        for (int d = 0; d < grid.dims; ++d)
            out.gradient[d].assign(n, 0.0);
        out.laplacian.assign(n, 0.0);
        out.has_derivatives = true;
    };
    if (toks.empty() || toks[0] == "none") {
        out.values.assign(n, 0.0);
        zero_derivatives();
        return out;
    }
    auto need = [&](std::size_t k) {
        if (toks.size() != k + 1)
            throw config_error("external spec '" + spec + "': expected " + std::to_string(k) +
                               " parameter(s)");
    };
    if (toks[0] == "harmonic") {
        need(1);
        const double omega = to_double(toks[1], 0, "harmonic omega");
        out.values.assign(n, 0.0);
        out.laplacian.assign(n, omega * omega * grid.dims);
        out.has_derivatives = true;
        for (int d = 0; d < grid.dims; ++d) {
            const auto x = coordinate_field(grid, d);
            out.gradient[d].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                out.values[i] += 0.5 * omega * omega * x[i] * x[i];
                out.gradient[d][i] = omega * omega * x[i];
            }
        }
        return out;
    }
    if (toks[0] == "constant") {
        need(1);
        out.values.assign(n, to_double(toks[1], 0, "constant value"));
        zero_derivatives();
        return out;
    }
    if (toks[0] == "table") {
        need(1);
        const WaveFunction field = read_snapshot(toks[1]);
        if (!field.grid().same_layout(grid))
            throw config_error("external table '" + toks[1] + "': grid layout mismatch");
        const int comp = std::min(component_for_table, field.components() - 1);
        out.values.resize(n);
        const auto data = field.component(comp);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(data[i].imag()) > 1e-12)
                throw config_error("external table '" + toks[1] +
                                   "': field has non-real entries");
            out.values[i] = data[i].real();
        }
        return out;  // derivatives fall back to spectral, caveat periodicity
    }
    throw config_error("unknown external potential '" + toks[0] +
                       "'; valid: none, harmonic, constant, table");
}

void fill_profile(std::span<Complex> out, const std::string& spec, const Grid& grid) {
    const auto toks = split_ws(spec);
    if (toks.empty())
        throw config_error("empty initial state spec");
    auto need = [&](std::size_t n) {
        if (toks.size() != n + 1)
            throw config_error("initial spec '" + spec + "': expected " + std::to_string(n) +
                               " parameter(s)");
    };
    const std::string& name = toks[0];
    if (name == "snapshot") {
        need(1);
        const WaveFunction field = read_snapshot(toks[1]);
        if (!field.grid().same_layout(grid))
            throw config_error("initial snapshot '" + toks[1] + "': grid layout mismatch");
        const auto src = field.component(0);
        std::copy(src.begin(), src.end(), out.begin());
        return;
    }
    if (name == "uniform") {
        need(1);
        const double amp = to_double(toks[1], 0, "uniform amplitude");
        std::fill(out.begin(), out.end(), Complex{amp, 0.0});
        return;
    }
    if (name == "gaussian" || name == "sech" || name == "oscillator-ground") {
        double x0 = 0.0, width = 1.0, k0 = 0.0;
        if (name == "oscillator-ground") {
            need(1);
            const double omega = to_double(toks[1], 0, "oscillator omega");
            if (!(omega > 0.0))
                throw config_error("oscillator-ground: omega must be positive");
            // ground state of 0.5*omega^2*x^2 under kinetic -laplacian
            width = 1.0 / std::sqrt(omega / std::numbers::sqrt2);
        } else {
            need(3);
            x0 = to_double(toks[1], 0, "profile x0");
            width = to_double(toks[2], 0, "profile width");
            k0 = to_double(toks[3], 0, "profile k0");
            if (!(width > 0.0))
                throw config_error("initial spec '" + spec + "': width must be positive");
        }
        std::array<std::vector<double>, 3> coords;
        for (int d = 0; d < grid.dims; ++d)
            coords[d] = coordinate_field(grid, d);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double envelope = 1.0;
            for (int d = 0; d < grid.dims; ++d) {
                const double u = (coords[d][i] - x0) / width;
                envelope *= (name == "sech") ? 1.0 / std::cosh(u) : std::exp(-0.5 * u * u);
            }
            out[i] = std::polar(envelope, k0 * coords[0][i]);
        }
        return;
    }
    throw config_error("unknown initial profile '" + name +
                       "'; valid: gaussian, sech, oscillator-ground, uniform, snapshot");
}

}  // namespace

ResolvedRun build_run(const RunConfig& c) {
    ResolvedRun run{Problem{make_grid(c.dims, c.points, c.lengths), {}, Cubic{0.0},
                            WaveFunction(make_grid(c.dims, c.points, c.lengths), 1)},
                    {}, c.observables_path, c.snapshot_final, c.snapshot_prefix,
                    c.snapshot_every};
    const Grid& grid = run.problem.grid;

    // potential family
    if (c.potential_family == "none") {
        run.problem.potential = Cubic{0.0};
    } else if (c.potential_family == "cubic") {
        run.problem.potential = Cubic{c.g};
    } else if (c.potential_family == "coupled-cubic") {
        const int n = static_cast<int>(c.coupling_rows.size());
        if (n < 1)
            throw config_error("coupled-cubic: need g_row0..g_rowN in [potential]");
        CoupledCubic cc{n, {}};
        for (const auto& row : c.coupling_rows) {
            if (static_cast<int>(row.size()) != n)
                throw config_error("coupled-cubic: coupling matrix must be square");
            cc.couplings.insert(cc.couplings.end(), row.begin(), row.end());
        }
        run.problem.potential = std::move(cc);
    } else if (c.potential_family == "four-wave-mixing") {
        FourWaveMixing fwm;
        fwm.g = c.g;
        if (!c.phase_mod_rows.empty()) {
            if (c.phase_mod_rows.size() != 4)
                throw config_error("four-wave-mixing: need exactly phase_mod_row0..3");
            for (int j = 0; j < 4; ++j) {
                if (c.phase_mod_rows[static_cast<std::size_t>(j)].size() != 4)
                    throw config_error("four-wave-mixing: phase_mod rows must have 4 entries");
                for (int k = 0; k < 4; ++k)
                    fwm.phase_mod[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                        c.phase_mod_rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
        }
        run.problem.potential = fwm;
    } else {
        throw config_error("unknown potential family '" + c.potential_family +
                           "'; valid: none, cubic, coupled-cubic, four-wave-mixing");
    }

    const int want = potential_components(run.problem.potential);
    const int components = want != 0 ? want : c.components;
    if (want != 0 && c.components != 1 && c.components != want)
        throw config_error("potential family '" + c.potential_family + "' needs " +
                           std::to_string(want) + " components, config says " +
                           std::to_string(c.components));

    // external potential, shared or per component
    bool any_external = c.external_shared != "none";
    for (const auto& s : c.external_per_component)
        any_external = any_external || (!s.empty() && s != "none");
    if (any_external) {
        std::vector<double> vext;
        std::array<std::vector<double>, 3> grad;
        std::vector<double> lap;
        bool all_derivatives = true;
        vext.reserve(static_cast<std::size_t>(components) * grid.total);
        for (int comp = 0; comp < components; ++comp) {
            std::string spec = c.external_shared;
            if (comp < static_cast<int>(c.external_per_component.size()) &&
                !c.external_per_component[static_cast<std::size_t>(comp)].empty())
                spec = c.external_per_component[static_cast<std::size_t>(comp)];
            auto field = resolve_external(spec, grid, comp);
            vext.insert(vext.end(), field.values.begin(), field.values.end());
            all_derivatives = all_derivatives && field.has_derivatives;
            if (all_derivatives) {
                lap.insert(lap.end(), field.laplacian.begin(), field.laplacian.end());
                for (int d = 0; d < grid.dims; ++d)
                    grad[d].insert(grad[d].end(), field.gradient[d].begin(),
                                   field.gradient[d].end());
            }
        }
        run.problem.h0 = make_hamiltonian(grid, components, c.kappa, std::move(vext));
        if (all_derivatives) {
            run.problem.h0.external_gradient = std::move(grad);
            run.problem.h0.external_laplacian = std::move(lap);
        }
    } else {
        run.problem.h0 = make_hamiltonian(grid, components, c.kappa);
    }

    // initial state
    WaveFunction psi(grid, components);
    if (c.initial_specs.size() == 1 && split_ws(c.initial_specs[0])[0] == "snapshot" &&
        components > 1) {
        const auto toks = split_ws(c.initial_specs[0]);
        if (toks.size() != 2)
            throw config_error("initial spec '" + c.initial_specs[0] + "': expected a path");
        const WaveFunction loaded = read_snapshot(toks[1]);
        if (!loaded.grid().same_layout(grid) || loaded.components() != components)
            throw config_error("initial snapshot '" + toks[1] + "': layout mismatch");
        psi = loaded;
    } else {
        if (static_cast<int>(c.initial_specs.size()) != components &&
            c.initial_specs.size() != 1)
            throw config_error("need one initial state spec per component (" +
                               std::to_string(components) + "), got " +
                               std::to_string(c.initial_specs.size()));
        for (int comp = 0; comp < components; ++comp) {
            const std::string& spec =
                c.initial_specs[c.initial_specs.size() == 1
                                    ? 0
                                    : static_cast<std::size_t>(comp)];
            fill_profile(psi.component(comp), spec, grid);
        }
    }
    if (c.normalize) {
        const double nrm = norm(psi);
        if (!(nrm > 0.0))
            throw config_error("cannot normalize a zero initial state");
        for (Complex& v : psi.values())
            v /= nrm;
    }
    run.problem.initial = std::move(psi);

    // stepping strategy
    if (!(c.dt > 0.0))
        throw config_error("[propagation] dt must be positive");
    if (c.n_steps < 0)
        throw config_error("[propagation] n_steps must be non-negative");
    if (c.observe_every < 1)
        throw config_error("[propagation] observe_every must be positive");
    run.prop.dt = c.dt;
    run.prop.n_steps = c.n_steps;
    run.prop.observe_every = c.observe_every;

    if (c.commutator_variant == "paper")
        run.prop.stepper.variant = CommutatorVariant::paper;
    else if (c.commutator_variant == "canonical")
        run.prop.stepper.variant = CommutatorVariant::canonical;
    else
        throw config_error("unknown commutator_variant '" + c.commutator_variant +
                           "'; valid: paper, canonical");

    const bool is_fwm = c.potential_family == "four-wave-mixing";
    if (c.scheme == "chin") {
        if (!std::holds_alternative<Cubic>(run.problem.potential))
            throw config_error("scheme 'chin' requires the cubic potential family");
        run.prop.stepper.kind = Stepper::Kind::chin;
        run.prop.stepper.gradient = chin_gradient();
    } else if (is_fwm) {
        if (c.scheme != "strang")
            throw config_error("four-wave-mixing propagates with its own palindromic "
                               "second-order step; set scheme = strang");
        run.prop.stepper.kind = Stepper::Kind::fwm;
    } else {
        run.prop.stepper.kind = Stepper::Kind::split;
        try {
            run.prop.stepper.scheme = scheme_by_name(c.scheme);
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
    }
    return run;
}

RunConfig demo_config(const std::string& name) {
    RunConfig c;
    if (name == "soliton") {
        c.dims = 1;
        c.points = {1024};
        c.lengths = {60.0};
        c.potential_family = "cubic";
        c.g = -2.0;
        c.initial_specs = {"sech 0 1 0"};
        c.scheme = "forest-ruth";
        c.dt = 2e-3;
        c.n_steps = 2500;
        c.observe_every = 100;
        c.observables_path = "soliton_obs.csv";
        c.snapshot_final = "soliton_final.nlsp";
        return c;
    }
    if (name == "trap") {
        c.dims = 1;
        c.points = {256};
        c.lengths = {20.0};
        c.potential_family = "cubic";
        c.g = 1.0;
        c.external_shared = "harmonic 1";
        c.initial_specs = {"gaussian 0 1 0"};
        c.normalize = true;
        c.scheme = "forest-ruth";
        c.dt = 1e-3;
        c.n_steps = 5000;
        c.observe_every = 50;
        c.observables_path = "trap_obs.csv";
        c.snapshot_final = "trap_final.nlsp";
        return c;
    }
    if (name == "fwm") {
        c.dims = 1;
        c.points = {64};
        c.lengths = {10.0};
        c.potential_family = "four-wave-mixing";
        c.g = 0.5;
        c.phase_mod_rows = {{1.0, 0.5, 0.5, 0.5},
                            {0.5, 1.0, 0.5, 0.5},
                            {0.5, 0.5, 1.0, 0.5},
                            {0.5, 0.5, 0.5, 1.0}};
        c.components = 4;
        c.external_shared = "harmonic 1";
        c.initial_specs = {"gaussian -1 1 1", "gaussian 1 1 -1", "gaussian 0 1.2 0",
                           "uniform 0.05"};
        c.scheme = "strang";
        c.dt = 1e-3;
        c.n_steps = 2000;
        c.observe_every = 20;
        c.observables_path = "fwm_obs.csv";
        c.snapshot_final = "fwm_final.nlsp";
        return c;
    }
    if (name == "chin") {
        c.dims = 1;
        c.points = {256};
        c.lengths = {20.0};
        c.potential_family = "cubic";
        c.g = 1.0;
        c.external_shared = "harmonic 1";
        c.initial_specs = {"gaussian 0 1 0"};
        c.normalize = true;
        c.scheme = "chin";
        c.commutator_variant = "canonical";
        c.dt = 2e-3;
        c.n_steps = 2500;
        c.observe_every = 25;
        c.observables_path = "chin_obs.csv";
        c.snapshot_final = "chin_final.nlsp";
        return c;
    }
    throw config_error("unknown demo '" + name + "'; valid: soliton, trap, fwm, chin");
}

std::vector<std::string> demo_names() { return {"soliton", "trap", "fwm", "chin"}; }

std::string observables_csv(const std::vector<ObservableRecord>& records) {
    std::ostringstream os;
    os << "time,norm_total";
    const std::size_t nc = records.empty() ? 1 : records[0].norm_per_component.size();
    for (std::size_t c = 0; c < nc; ++c)
        os << ",norm_c" << c;
    os << ",energy\n";
    for (const auto& r : records) {
        os << fmt(r.time) << "," << fmt(r.norm_total);
        for (double v : r.norm_per_component)
            os << "," << fmt(v);
        os << ",";
        if (r.energy)
            os << fmt(*r.energy);
        else
            os << "nan";
        os << "\n";
    }
    return os.str();
}

}  // namespace nlsplit
