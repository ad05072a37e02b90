// shockrefl: polar, rr, map and sim front end.
//
// Exit codes: 0 success, 2 parameter error, 3 I/O error, 4 numerical failure.
// Parameters: built-in defaults, then --config <json>, then flags.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shockrefl/errors.hpp"
#include "shockrefl/io.hpp"
#include "shockrefl/polar.hpp"
#include "shockrefl/reflection.hpp"
#include "shockrefl/sim.hpp"
#include "shockrefl/transition_map.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace shockrefl;

namespace {

enum Exit { kOk = 0, kParam = 2, kIo = 3, kNumerical = 4 };

struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One subcommand's parameter document.
struct Params {
    ordered_json values;  // defaults, overwritten by the config file and then by flags
    std::string config;
    std::vector<std::function<void()>> flags;

    double num(const char* key) const { return values.at(key).get<double>(); }
    int integer(const char* key) const {
        const double v = values.at(key).get<double>();
        if (v != std::floor(v)) throw ParamError(std::string(key) + " must be an integer");
        return static_cast<int>(v);
    }
    std::string str(const char* key) const { return values.at(key).get<std::string>(); }
};

bool same_kind(const json& a, const json& b) {
    if (a.is_number()) return b.is_number();
    return a.type() == b.type();
}

void load_config(Params& p) {
    if (p.config.empty()) return;
    json doc;
    try {
        doc = json::parse(read_file(p.config));
    } catch (const json::parse_error& e) {
        throw ParamError("config " + p.config + ": " + e.what());
    }
    if (!doc.is_object()) throw ParamError("config " + p.config + ": top level must be an object");
    for (const auto& [key, v] : doc.items()) {
        if (!p.values.contains(key)) throw ParamError("config " + p.config + ": unknown key '" + key + "'");
        if (!same_kind(p.values[key], v))
            throw ParamError("config " + p.config + ": key '" + key + "' expects " + p.values[key].type_name());
        if (v.is_array())
            for (const auto& e : v)
                if (!e.is_number()) throw ParamError("config " + p.config + ": key '" + key + "' expects numbers");
        p.values[key] = v;
    }
}

void resolve(Params& p) {
    load_config(p);
    for (auto& f : p.flags) f();
}

template <class T>
void flag(CLI::App* app, Params& p, const std::string& name, const char* key, const std::string& help) {
    auto v = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *v, help + " [" + p.values[key].dump() + "]");
    if constexpr (std::is_same_v<T, std::vector<double>>) opt->delimiter(',');
    p.flags.push_back([&p, v, opt, key] {
        if (opt->count() > 0) p.values[key] = *v;
    });
}

void add_config(CLI::App* app, Params& p) {
    app->add_option("--config", p.config, "JSON parameter file (keys as printed in brackets)");
}

void require_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("output directory " + dir.string() + " does not exist");
}

fs::path summary_path(const fs::path& csv) {
    fs::path s = csv;
    return s.replace_extension(".json");
}

// polar -------------------------------------------------------------------------------------------

void setup_polar(CLI::App* app, Params& p) {
    p.values = {{"gamma", 1.4}, {"mach", 3.0}, {"samples", 512}, {"out", "polar.csv"}, {"summary", ""}};
    add_config(app, p);
    flag<double>(app, p, "--gamma", "gamma", "adiabatic exponent");
    flag<double>(app, p, "--mach", "mach", "upstream Mach number");
    flag<int>(app, p, "--samples", "samples", "beta samples");
    flag<std::string>(app, p, "--out", "out", "polar CSV");
    flag<std::string>(app, p, "--summary", "summary", "summary JSON (empty: CSV path with .json)");
}

int run_polar(Params& p) {
    GasConstants k;
    k.gamma = p.num("gamma");
    k.validate();
    const double M = p.num("mach");
    const FluidState up{1.0, 1.0, {M, 0.0}};
    const ShockPolar polar = build_polar(up, k, p.integer("samples"));
    std::ostringstream csv;
    write_polar_csv(polar, csv);
    const fs::path out = p.str("out");
    const fs::path summary = p.str("summary").empty() ? summary_path(out) : fs::path(p.str("summary"));
    ordered_json s = {{"gamma", k.gamma},
                      {"mach", M},
                      {"tau_star_deg", deg(polar.tau_star)},
                      {"tau_sonic_deg", deg(polar.tau_sonic)},
                      {"beta_max_deg", deg(polar.beta_max)},
                      {"beta_star_deg", deg(polar.beta_star)},
                      {"weak_supersonic_below_sonic", polar.weak_supersonic_below_sonic}};
    write_file_atomic(out, csv.str());
    write_file_atomic(summary, s.dump(2) + "\n");
    std::cout << s.dump(2) << "\n";
    return kOk;
}

// rr ----------------------------------------------------------------------------------------------

void add_reflection_flags(CLI::App* app, Params& p) {
    flag<double>(app, p, "--gamma", "gamma", "adiabatic exponent");
    flag<double>(app, p, "--mach", "mach", "M1 in the reflection-point frame");
    flag<double>(app, p, "--alpha", "alpha_deg", "incident shock to opposite wall angle, deg");
    flag<double>(app, p, "--theta", "theta_deg", "wall parameter (corner angle 180 - theta), deg");
}

ReflectionConfig reflection_config(const Params& p) {
    ReflectionConfig c;
    c.k.gamma = p.num("gamma");
    c.M1 = p.num("mach");
    c.alpha = rad(p.num("alpha_deg"));
    c.theta = rad(p.num("theta_deg"));
    c.validate();
    return c;
}

void setup_rr(CLI::App* app, Params& p) {
    p.values = {{"gamma", 1.4}, {"mach", 3.0}, {"alpha_deg", 0.0}, {"theta_deg", 142.9}, {"polar_samples", 256},
                {"out", ""}};
    add_config(app, p);
    add_reflection_flags(app, p);
    flag<int>(app, p, "--polar-samples", "polar_samples", "reflected polar samples");
    flag<std::string>(app, p, "--out", "out", "report JSON (empty: stdout)");
}

int run_rr(Params& p) {
    const ReflectionConfig cfg = reflection_config(p);
    std::string report;
    try {
        report = local_rr_json(local_rr(cfg, p.integer("polar_samples")));
    } catch (const NoReflectedPolarError& e) {
        // sector 2 subsonic at the reflection point: no local RR of either type
        ordered_json j;
        j["config"] = {{"gamma", cfg.k.gamma},
                       {"mach", cfg.M1},
                       {"alpha_deg", p.num("alpha_deg")},
                       {"theta_deg", p.num("theta_deg")}};
        j["exists"] = false;
        j["note"] = e.what();
        j["predictions"] = {{"detachment", "MR"}, {"sonic", "MR"}, {"new", "MR"}};
        report = j.dump(2);
    }
    if (p.str("out").empty())
        std::cout << report << "\n";
    else
        write_file_atomic(p.str("out"), report + "\n");
    return kOk;
}

// map ---------------------------------------------------------------------------------------------

void setup_map(CLI::App* app, Params& p) {
    const SweepOptions d;
    p.values = {{"gamma", d.gamma},
                {"alpha_deg", deg(d.alpha)},
                {"m1_min", d.m1_min},
                {"m1_max", d.m1_max},
                {"theta_min_deg", deg(d.theta_min)},
                {"theta_max_deg", deg(d.theta_max)},
                {"resolution", d.n_m1},
                {"n_m1", 0},
                {"n_theta", 0},
                {"polar_samples", d.polar_samples},
                {"out_dir", "."},
                {"cells", "cells.csv"},
                {"curves", "curves.csv"}};
    add_config(app, p);
    flag<double>(app, p, "--gamma", "gamma", "adiabatic exponent");
    flag<double>(app, p, "--alpha", "alpha_deg", "alpha, deg");
    flag<double>(app, p, "--m1-min", "m1_min", "lowest M1");
    flag<double>(app, p, "--m1-max", "m1_max", "highest M1");
    flag<double>(app, p, "--theta-min", "theta_min_deg", "lowest theta, deg");
    flag<double>(app, p, "--theta-max", "theta_max_deg", "highest theta, deg");
    flag<int>(app, p, "--resolution", "resolution", "samples per axis");
    flag<int>(app, p, "--n-m1", "n_m1", "M1 samples (0: resolution)");
    flag<int>(app, p, "--n-theta", "n_theta", "theta samples (0: resolution)");
    flag<int>(app, p, "--polar-samples", "polar_samples", "reflected polar samples per cell");
    flag<std::string>(app, p, "--out-dir", "out_dir", "output directory");
    flag<std::string>(app, p, "--cells", "cells", "cell CSV name");
    flag<std::string>(app, p, "--curves", "curves", "curve CSV name");
}

int run_map(Params& p) {
    SweepOptions o;
    o.gamma = p.num("gamma");
    o.alpha = rad(p.num("alpha_deg"));
    o.m1_min = p.num("m1_min");
    o.m1_max = p.num("m1_max");
    o.theta_min = rad(p.num("theta_min_deg"));
    o.theta_max = rad(p.num("theta_max_deg"));
    const int n = p.integer("resolution");
    o.n_m1 = p.integer("n_m1") > 0 ? p.integer("n_m1") : n;
    o.n_theta = p.integer("n_theta") > 0 ? p.integer("n_theta") : n;
    o.polar_samples = p.integer("polar_samples");
    o.validate();
    const fs::path dir = p.str("out_dir");
    require_dir(dir);
    const TransitionMap map = sweep(o);
    export_csv(map, dir / p.str("cells"), dir / p.str("curves"));
    ordered_json s = {{"cells", (dir / p.str("cells")).string()}, {"curves", (dir / p.str("curves")).string()}};
    for (const Curve& c : map.curves) s["curve_points"][c.name] = c.points.size();
    std::cout << s.dump(2) << "\n";
    return kOk;
}

// sim ---------------------------------------------------------------------------------------------

void setup_sim(CLI::App* app, Params& p, bool& dry_run, int& resolution) {
    const SimConfig d;
    p.values = {{"gamma", 1.4},
                {"mach", 3.0},
                {"alpha_deg", -5.0},
                {"theta_deg", 147.9},
                {"nx", d.nx},
                {"ny", d.ny},
                {"extent", d.extent},
                {"extent_factor", d.extent_factor},
                {"cfl", d.cfl},
                {"t0", d.t0},
                {"t_end", d.t_end},
                {"order", 2},
                {"k_stem", d.k_stem},
                {"min_travel_cells", d.min_travel_cells},
                {"dump_times", json::array()},
                {"out_dir", "."}};
    add_config(app, p);
    add_reflection_flags(app, p);
    flag<int>(app, p, "--nx", "nx", "cells along the reflection wall");
    flag<int>(app, p, "--ny", "ny", "cells along the opposite wall");
    app->add_option("--resolution", resolution, "sets nx and ny unless given separately");
    flag<double>(app, p, "--extent", "extent", "side length along each wall (0: extent_factor x_c t_end)");
    flag<double>(app, p, "--extent-factor", "extent_factor", "side length in units of x_c t_end");
    flag<double>(app, p, "--cfl", "cfl", "Courant number");
    flag<double>(app, p, "--t0", "t0", "start time");
    flag<double>(app, p, "--t-end", "t_end", "final time");
    flag<int>(app, p, "--order", "order", "1 or 2");
    flag<int>(app, p, "--k-stem", "k_stem", "junction rows above the wall that count as MR");
    flag<int>(app, p, "--min-travel-cells", "min_travel_cells", "required reflection-point travel");
    flag<std::vector<double>>(app, p, "--dump-times", "dump_times", "field dump times, comma separated");
    flag<std::string>(app, p, "--out-dir", "out_dir", "output directory");
    app->add_flag("--dry-run", dry_run, "validate the configuration and set up the grid without stepping");
}

SimConfig sim_config(const Params& p) {
    SimConfig c;
    c.reflection = reflection_config(p);
    c.nx = p.integer("nx");
    c.ny = p.integer("ny");
    c.extent = p.num("extent");
    c.extent_factor = p.num("extent_factor");
    c.cfl = p.num("cfl");
    c.t0 = p.num("t0");
    c.t_end = p.num("t_end");
    const int order = p.integer("order");
    if (order != 1 && order != 2) throw ParamError("order must be 1 or 2");
    c.second_order = order == 2;
    c.k_stem = p.integer("k_stem");
    c.min_travel_cells = p.integer("min_travel_cells");
    c.validate();
    return c;
}

std::string dump_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "field_t%.6f.csv", t);
    return buf;
}

int run_sim(Params& p, bool dry_run) {
    const SimConfig cfg = sim_config(p);
    const fs::path dir = p.str("out_dir");
    const SimField f0 = setup_initial(cfg);
    const double xc = canonical_geometry(cfg.reflection).geometry.corner_distance;
    if (dry_run) {
        ordered_json j = {{"valid", true},
                          {"nx", f0.grid.nx},
                          {"ny", f0.grid.ny},
                          {"hs", f0.grid.hs},
                          {"hr", f0.grid.hr},
                          {"sigma", f0.exact.sigma},
                          {"travel_cells", xc * (cfg.t_end - cfg.t0) / f0.grid.hs},
                          {"initial_dt", stable_dt(f0, cfg.cfl)},
                          {"out_dir_exists", fs::is_directory(dir)}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    require_dir(dir);
    RunOptions opt;
    opt.dump_times = p.values["dump_times"].get<std::vector<double>>();
    opt.on_dump = [&](const SimField& f) { write_file_atomic(dir / dump_name(f.t), field_csv(f)); };
    opt.failure_dump = dir / "failure.csv";
    const RunOutput out = run(cfg, opt);
    write_file_atomic(dir / "field.csv", field_csv(out.field));
    write_file_atomic(dir / "pattern.json", pattern_json(out.pattern) + "\n");
    ordered_json j = {{"classification", to_string(out.pattern.classification)},
                      {"steps", out.steps},
                      {"seconds", out.seconds},
                      {"sigma", out.sigma},
                      {"front_speed", out.front_speed},
                      {"front_speed_rel_error",
                       out.front_speed != 0.0 ? std::abs(out.front_speed - out.sigma) / std::abs(out.sigma) : -1.0},
                      {"max_mass_defect", out.max_mass_defect},
                      {"front_mass_flux", {out.front_fluxes.upstream, out.front_fluxes.downstream}}};
    write_file_atomic(dir / "run.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shock reflection analysis: shock polars, local regular reflection, transition maps and simulations"};
    app.set_version_flag("--version", SHOCKREFL_VERSION);
    app.require_subcommand(1);

    Params polar_p, rr_p, map_p, sim_p;
    bool dry_run = false;
    int resolution = 0;
    auto* polar_cmd = app.add_subcommand("polar", "shock polar CSV and summary");
    auto* rr_cmd = app.add_subcommand("rr", "local regular reflection report");
    auto* map_cmd = app.add_subcommand("map", "transition map sweep");
    auto* sim_cmd = app.add_subcommand("sim", "shock reflection simulation");
    setup_polar(polar_cmd, polar_p);
    setup_rr(rr_cmd, rr_p);
    setup_map(map_cmd, map_p);
    setup_sim(sim_cmd, sim_p, dry_run, resolution);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParam;
    }

    try {
        if (*polar_cmd) {
            resolve(polar_p);
            return run_polar(polar_p);
        }
        if (*rr_cmd) {
            resolve(rr_p);
            return run_rr(rr_p);
        }
        if (*map_cmd) {
            resolve(map_p);
            return run_map(map_p);
        }
        resolve(sim_p);
        if (resolution > 0) {
            if (sim_cmd->get_option("--nx")->count() == 0) sim_p.values["nx"] = resolution;
            if (sim_cmd->get_option("--ny")->count() == 0) sim_p.values["ny"] = resolution;
        }
        return run_sim(sim_p, dry_run);
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParam;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParam;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParam;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
}
