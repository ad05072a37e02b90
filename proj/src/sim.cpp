#include "shockrefl/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <sstream>

#include "shockrefl/io.hpp"

namespace shockrefl {

void SimConfig::validate() const {
    reflection.validate();
    if (nx < 8 || ny < 8) throw DomainError("sim: grid needs at least 8 cells per axis");
    if (!(cfl > 0.0 && cfl < 1.0)) throw DomainError("sim: cfl must lie in (0, 1)");
    if (!(t0 > 0.0 && t_end > t0)) throw DomainError("sim: need 0 < t0 < t_end");
    if (!(extent >= 0.0) || !(extent_factor > 0.0)) throw DomainError("sim: extent must be positive");
    if (k_stem < 1) throw DomainError("sim: k_stem must be at least 1");
    const SimGrid g = make_grid(*this);
    const double travel = canonical_geometry(reflection).geometry.corner_distance * (t_end - t0) / g.hs;
    if (travel < min_travel_cells) {
        std::ostringstream os;
        os << "sim: the reflection point crosses only " << travel << " cells (need " << min_travel_cells << ")";
        throw DomainError(os.str());
    }
}

SimGrid make_grid(const SimConfig& cfg) {
    const double xc = canonical_geometry(cfg.reflection).geometry.corner_distance;
    const double L = cfg.extent > 0.0 ? cfg.extent : cfg.extent_factor * xc * cfg.t_end;
    SimGrid g;
    g.nx = cfg.nx;
    g.ny = cfg.ny;
    g.hs = L / cfg.nx;
    g.hr = L / cfg.ny;
    g.a = {-1.0, 0.0};
    g.b = unit_from_angle(cfg.reflection.theta);
    g.sin_theta = std::sin(cfg.reflection.theta);
    g.area = g.hs * g.hr * g.sin_theta;
    g.n_s = rot90(g.b);
    g.n_r = {0.0, 1.0};
    return g;
}

TwoState exact_two_state(const ReflectionConfig& cfg) {
    const auto setup = canonical_geometry(cfg);
    TwoState e;
    e.s1 = setup.geometry.to_frame(setup.incident.upstream);
    e.s2 = setup.geometry.to_frame(setup.incident.downstream);
    e.n = setup.geometry.incident_normal;
    e.sigma = setup.geometry.incident_speed;
    return e;
}

SimField setup_initial(const SimConfig& cfg) {
    cfg.validate();
    SimField f;
    f.grid = make_grid(cfg);
    f.exact = exact_two_state(cfg.reflection);
    f.k = cfg.reflection.k;
    f.t = cfg.t0;
    const auto n = f.grid.size();
    f.rho.resize(n);
    f.vx.resize(n);
    f.vy.resize(n);
    std::size_t downstream = 0;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const FluidState& s = f.exact.at(f.grid.center(i, j), f.t);
            const auto k = f.grid.index(i, j);
            f.rho[k] = s.rho;
            f.vx[k] = s.v.x;
            f.vy[k] = s.v.y;
            downstream += &s == &f.exact.s2;
        }
    if (downstream == 0 || downstream == n) throw GeometryError("sim: incident shock does not cross the grid at t0");
    return f;
}

double total_mass(const SimField& f) {
    double m = 0.0;
    for (double r : f.rho) m += r;
    return m * f.grid.area;
}

namespace {

// s where the exact incident shock crosses the row through r at time t.
double exact_crossing(const SimField& f, double r, double t) {
    const double an = dot(f.grid.a, f.exact.n);
    if (std::abs(an) < 1e-12) throw GeometryError("sim: incident shock parallel to the grid rows");
    return (f.exact.sigma * t - r * dot(f.grid.b, f.exact.n)) / an;
}

}  // namespace

double front_position(const SimField& f, int j, int w) {
    const SimGrid& g = f.grid;
    const double s_star = exact_crossing(f, (j + 0.5) * g.hr, f.t);
    const int ic = static_cast<int>(std::floor(s_star / g.hs));
    const int lo = ic - w, hi = ic + w;
    if (lo < 0 || hi >= g.nx) throw GeometryError("sim: front window leaves the grid on row " + std::to_string(j));
    const double r1 = f.exact.s1.rho, r2 = f.exact.s2.rho;
    const bool down_right = dot(g.a, f.exact.n) > 0.0;
    double len = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const double phi = (f.rho[g.index(i, j)] - r1) / (r2 - r1);
        len += down_right ? 1.0 - phi : phi;
    }
    return (lo + len) * g.hs;
}

std::optional<int> front_row(const SimField& f, int w) {
    const SimGrid& g = f.grid;
    const double t = f.t;
    const Vec2 v2 = f.exact.s2.v;
    const double c1 = f.exact.s1.c, c2 = f.exact.s2.c;
    const double xc = exact_crossing(f, 0.0, 1.0);
    // incident shock meets the opposite wall at r = sigma t / (b . n) when that is positive
    const double bn = dot(g.b, f.exact.n);
    const double rP = std::abs(bn) > 1e-12 ? f.exact.sigma / bn : -1.0;
    std::optional<int> best;
    double best_d = 0.0;
    // keep clear of the far boundaries, where exact ghosts meet the smeared front
    const int margin_s = g.nx / 8, margin_r = g.ny / 8;
    for (int j = 0; j < g.ny - margin_r; ++j) {
        const double r = (j + 0.5) * g.hr;
        const double s = exact_crossing(f, r, t);
        if (s / g.hs < w + 2 || s / g.hs > g.nx - w - margin_s) continue;
        const Vec2 xi = g.point(s, r) / t;
        // the corner only influences the inside of the sector-2 sonic circle
        if (norm(xi - v2) < c2 + (w * g.hs) / t) continue;
        if (rP > 0.0 && norm(xi - rP * g.b) < 1.5 * std::max(c1, c2)) continue;
        const double d = norm(xi - xc * g.a);
        if (d < 0.5 * xc) continue;
        if (d > best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

FrontFluxes front_mass_fluxes(const SimField& f, int j, int m) {
    const SimGrid& g = f.grid;
    const double s_f = front_position(f, j);
    const int dir = dot(g.a, f.exact.n) > 0.0 ? 1 : -1;  // +s points downstream when dir = 1
    const int ic = static_cast<int>(std::floor(s_f / g.hs));
    // band averages smooth the post-shock ripple of the captured front
    constexpr int band = 12;
    auto flux = [&](int first, int step) {
        double sum = 0.0;
        for (int q = 0; q < band; ++q) {
            const int i = std::clamp(first + step * q, 0, g.nx - 1);
            const auto k = g.index(i, j);
            sum += f.rho[k] * (f.vx[k] * f.exact.n.x + f.vy[k] * f.exact.n.y - f.exact.sigma);
        }
        return sum / band;
    };
    return {flux(ic - dir * m, -dir), flux(ic + dir * m, dir)};
}

RunOutput run(const SimConfig& cfg, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    out.field = setup_initial(cfg);
    SimField& f = out.field;
    out.sigma = f.exact.sigma;
    auto ws = make_workspace();
    std::vector<double> dumps = opt.dump_times;
    std::sort(dumps.begin(), dumps.end());
    std::size_t next_dump = 0;
    while (next_dump < dumps.size() && dumps[next_dump] <= f.t) {
        if (opt.on_dump) opt.on_dump(f);
        ++next_dump;
    }

    // Captured front speed on a fixed row crossing the undisturbed incident shock: over the first
    // 10 steps with such a row, and over the last tenth of the run.
    struct Probe {
        std::optional<int> row;
        double t = 0.0, s = 0.0;
        int steps = 0;
        bool done = false;
    };
    Probe early, late;
    const double an = dot(f.grid.a, f.exact.n);
    const double t_late = cfg.t_end - 0.1 * (cfg.t_end - cfg.t0);
    auto open_probe = [&](Probe& p) {
        if (p.row || p.done) return;
        p.row = front_row(f);
        if (p.row) {
            p.t = f.t;
            p.s = front_position(f, *p.row);
        }
    };
    auto probe_speed = [&](const Probe& p) {
        return an * (front_position(f, *p.row) - p.s) / (f.t - p.t);
    };
    open_probe(early);

    try {
        while (f.t < cfg.t_end) {
            double limit = cfg.t_end;
            if (next_dump < dumps.size()) limit = std::min(limit, dumps[next_dump]);
            const double m0 = total_mass(f);
            const StepStats st = opt.parallel ? step(f, cfg.cfl, cfg.second_order, limit, ws.get())
                                              : step_reference(f, cfg.cfl, cfg.second_order, limit);
            ++out.steps;
            const double m1 = total_mass(f);
            out.max_mass_defect = std::max(out.max_mass_defect, std::abs(m1 - (m0 - st.boundary_mass_out)) / m0);
            if (early.row && !early.done && ++early.steps == 10) {
                out.front_speed_early = probe_speed(early);
                out.front_time = early.t;
                early.done = true;
            }
            open_probe(early);
            if (f.t >= t_late) open_probe(late);
            if (next_dump < dumps.size() && f.t >= dumps[next_dump]) {
                if (opt.on_dump) opt.on_dump(f);
                ++next_dump;
            }
        }
    } catch (const StepFailure& e) {
        if (!opt.failure_dump.empty()) write_file_atomic(opt.failure_dump, field_csv(e.last_good()));
        throw;
    }

    if (late.row && f.t > late.t) out.front_speed = probe_speed(late);
    if (const auto r = front_row(f)) out.front_fluxes = front_mass_fluxes(f, *r);
    out.pattern = classify_pattern(f, cfg.k_stem);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string field_csv(const SimField& f) {
    const SimGrid& g = f.grid;
    const auto ind = shock_indicator(f);
    std::string s = "x,y,xi,eta,rho,vx,vy,L,shock_indicator\n";
    s.reserve(g.size() * 160);
    char buf[256];
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto k = g.index(i, j);
            const Vec2 x = g.center(i, j);
            const Vec2 xi = x / f.t;
            const Vec2 v{f.vx[k], f.vy[k]};
            const double L = pseudo_mach(v, xi, sound_speed(f.rho[k], f.k));
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.6g\n", x.x, x.y, xi.x, xi.y,
                          f.rho[k], v.x, v.y, L, ind[k]);
            s += buf;
        }
    return s;
}

}  // namespace shockrefl
