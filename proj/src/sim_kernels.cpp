#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockrefl/sim.hpp"

namespace shockrefl {

namespace {

struct Eos {
    double g1;
    double scale;  // c0^2 / (gamma - 1)
    double inv_rho0;

    explicit Eos(const GasConstants& k) : g1(k.gamma - 1.0), scale(k.c0 * k.c0 / (k.gamma - 1.0)), inv_rho0(1.0 / k.rho0) {}
    double pi(double rho) const { return scale * std::pow(rho * inv_rho0, g1); }
};

struct Prim {
    double rho, vx, vy;
};

struct Flux {
    double m, fx, fy;
};

// Ghost-padded copy of the field, two layers on each side.
struct Padded {
    int px = 0, py = 0;
    std::vector<double> rho, vx, vy;

    void resize(int nx, int ny) {
        px = nx + 4;
        py = ny + 4;
        const auto n = static_cast<std::size_t>(px) * py;
        rho.resize(n);
        vx.resize(n);
        vy.resize(n);
    }
    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j + 2) * px + (i + 2); }
    Prim get(int i, int j) const {
        const auto k = at(i, j);
        return {rho[k], vx[k], vy[k]};
    }
    void set(int i, int j, Prim p) {
        const auto k = at(i, j);
        rho[k] = p.rho;
        vx[k] = p.vx;
        vy[k] = p.vy;
    }
};

Prim mirror(Prim p, Vec2 n) {
    const double vn = p.vx * n.x + p.vy * n.y;
    return {p.rho, p.vx - 2.0 * vn * n.x, p.vy - 2.0 * vn * n.y};
}

double mc(double dl, double dr) {
    if (dl * dr <= 0.0) return 0.0;
    const double m = std::min({2.0 * std::abs(dl), 2.0 * std::abs(dr), 0.5 * std::abs(dl + dr)});
    return dl > 0.0 ? m : -m;
}

Prim slope(Prim l, Prim c, Prim r) {
    return {mc(c.rho - l.rho, r.rho - c.rho), mc(c.vx - l.vx, r.vx - c.vx), mc(c.vy - l.vy, r.vy - c.vy)};
}

Prim plus_half(Prim c, Prim s) { return {c.rho + 0.5 * s.rho, c.vx + 0.5 * s.vx, c.vy + 0.5 * s.vy}; }
Prim minus_half(Prim c, Prim s) { return {c.rho - 0.5 * s.rho, c.vx - 0.5 * s.vx, c.vy - 0.5 * s.vy}; }

Flux hll(Prim L, Prim R, Vec2 n, const Eos& eos) {
    const double piL = eos.pi(L.rho), piR = eos.pi(R.rho);
    const double cL = std::sqrt(eos.g1 * piL), cR = std::sqrt(eos.g1 * piR);
    const double vnL = L.vx * n.x + L.vy * n.y, vnR = R.vx * n.x + R.vy * n.y;
    const double BL = 0.5 * (L.vx * L.vx + L.vy * L.vy) + piL;
    const double BR = 0.5 * (R.vx * R.vx + R.vy * R.vy) + piR;
    const double SL = std::min(vnL - cL, vnR - cR);
    const double SR = std::max(vnL + cL, vnR + cR);
    const Flux FL{L.rho * vnL, BL * n.x, BL * n.y};
    const Flux FR{R.rho * vnR, BR * n.x, BR * n.y};
    if (SL >= 0.0) return FL;
    if (SR <= 0.0) return FR;
    const double inv = 1.0 / (SR - SL);
    return {(SR * FL.m - SL * FR.m + SL * SR * (R.rho - L.rho)) * inv,
            (SR * FL.fx - SL * FR.fx + SL * SR * (R.vx - L.vx)) * inv,
            (SR * FL.fy - SL * FR.fy + SL * SR * (R.vy - L.vy)) * inv};
}

// HLL between the interior face state and its mirror image, in closed form: the mass flux is
// exactly zero and the momentum flux is (B - S vn) n with S = |vn| + c.
Flux wall_flux(Prim in, Vec2 n, const Eos& eos) {
    const double p = eos.pi(in.rho);
    const double c = std::sqrt(eos.g1 * p);
    const double vn = in.vx * n.x + in.vy * n.y;
    const double B = 0.5 * (in.vx * in.vx + in.vy * in.vy) + p;
    const double q = B - (std::abs(vn) + c) * vn;
    return {0.0, q * n.x, q * n.y};
}

// Flux through the constant-s face fi (between cells fi-1 and fi) on row j, along n_s.
Flux face_s(const Padded& P, int fi, int j, const SimGrid& g, const Eos& eos, bool second) {
    const Prim R = P.get(fi, j);
    Prim r = R;
    if (second) r = minus_half(R, slope(P.get(fi - 1, j), R, P.get(fi + 1, j)));
    if (fi == 0) return wall_flux(r, g.n_s, eos);
    const Prim L = P.get(fi - 1, j);
    Prim l = L;
    if (second) l = plus_half(L, slope(P.get(fi - 2, j), L, R));
    return hll(l, r, g.n_s, eos);
}

Flux face_r(const Padded& P, int i, int fj, const SimGrid& g, const Eos& eos, bool second) {
    const Prim R = P.get(i, fj);
    Prim r = R;
    if (second) r = minus_half(R, slope(P.get(i, fj - 1), R, P.get(i, fj + 1)));
    if (fj == 0) return wall_flux(r, g.n_r, eos);
    const Prim L = P.get(i, fj - 1);
    Prim l = L;
    if (second) l = plus_half(L, slope(P.get(i, fj - 2), L, R));
    return hll(l, r, g.n_r, eos);
}

Prim exact_prim(const SimField& f, int i, int j, double t) {
    const FluidState& s = f.exact.at(f.grid.center(i, j), t);
    return {s.rho, s.v.x, s.v.y};
}

void copy_interior(Padded& P, const SimField& f, const double* rho, const double* vx, const double* vy,
                   bool parallel) {
    const SimGrid& g = f.grid;
#pragma omp parallel for if (parallel)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto k = g.index(i, j);
            P.set(i, j, {rho[k], vx[k], vy[k]});
        }
}

void fill_ghosts(Padded& P, const SimField& f, double t) {
    const SimGrid& g = f.grid;
    for (int j = 0; j < g.ny; ++j) {
        P.set(-1, j, mirror(P.get(0, j), g.n_s));
        P.set(-2, j, mirror(P.get(1, j), g.n_s));
        P.set(g.nx, j, exact_prim(f, g.nx, j, t));
        P.set(g.nx + 1, j, exact_prim(f, g.nx + 1, j, t));
    }
    for (int i = 0; i < g.nx; ++i) {
        P.set(i, -1, mirror(P.get(i, 0), g.n_r));
        P.set(i, -2, mirror(P.get(i, 1), g.n_r));
        P.set(i, g.ny, exact_prim(f, i, g.ny, t));
        P.set(i, g.ny + 1, exact_prim(f, i, g.ny + 1, t));
    }
}

struct Residual {
    std::vector<double> rho, vx, vy;
    void resize(std::size_t n) {
        rho.resize(n);
        vx.resize(n);
        vy.resize(n);
    }
};

inline void cell_update(Residual& R, std::size_t k, Flux w, Flux e, Flux s, Flux nn, const SimGrid& g) {
    const double inv = 1.0 / g.area;
    R.rho[k] = -((e.m - w.m) * g.hr + (nn.m - s.m) * g.hs) * inv;
    R.vx[k] = -((e.fx - w.fx) * g.hr + (nn.fx - s.fx) * g.hs) * inv;
    R.vy[k] = -((e.fy - w.fy) * g.hr + (nn.fy - s.fy) * g.hs) * inv;
}

}  // namespace

struct StepWorkspace {
    Padded P;
    std::vector<Flux> Fs;  // (nx + 1) * ny, index j * (nx + 1) + fi
    std::vector<Flux> Fr;  // nx * (ny + 1), index fj * nx + i
    Residual R;
    std::vector<double> rho0, vx0, vy0;

    void resize(const SimGrid& g) {
        P.resize(g.nx, g.ny);
        Fs.resize(static_cast<std::size_t>(g.nx + 1) * g.ny);
        Fr.resize(static_cast<std::size_t>(g.nx) * (g.ny + 1));
        R.resize(g.size());
    }
};

void StepWorkspaceDeleter::operator()(StepWorkspace* w) const { delete w; }
WorkspacePtr make_workspace() { return WorkspacePtr(new StepWorkspace); }

namespace {

// Residual with face fluxes stored first (parallel over faces), then a cell pass.
// Returns the outward mass flux rate through the far boundaries.
double residual_parallel(StepWorkspace& w, const SimField& f, bool second, const Eos& eos) {
    const SimGrid& g = f.grid;
    const int nx = g.nx, ny = g.ny;
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
        for (int j = 0; j < ny; ++j)
            for (int fi = 0; fi <= nx; ++fi)
                w.Fs[static_cast<std::size_t>(j) * (nx + 1) + fi] = face_s(w.P, fi, j, g, eos, second);
#pragma omp for schedule(static)
        for (int fj = 0; fj <= ny; ++fj)
            for (int i = 0; i < nx; ++i) w.Fr[static_cast<std::size_t>(fj) * nx + i] = face_r(w.P, i, fj, g, eos, second);
#pragma omp for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t rs = static_cast<std::size_t>(j) * (nx + 1);
                cell_update(w.R, g.index(i, j), w.Fs[rs + i], w.Fs[rs + i + 1],
                            w.Fr[static_cast<std::size_t>(j) * nx + i], w.Fr[static_cast<std::size_t>(j + 1) * nx + i], g);
            }
    }
    double out = 0.0;
    for (int j = 0; j < ny; ++j) out += w.Fs[static_cast<std::size_t>(j) * (nx + 1) + nx].m * g.hr;
    for (int i = 0; i < nx; ++i) out += w.Fr[static_cast<std::size_t>(ny) * nx + i].m * g.hs;
    return out;
}

double residual_serial(StepWorkspace& w, const SimField& f, bool second, const Eos& eos) {
    const SimGrid& g = f.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            cell_update(w.R, g.index(i, j), face_s(w.P, i, j, g, eos, second), face_s(w.P, i + 1, j, g, eos, second),
                        face_r(w.P, i, j, g, eos, second), face_r(w.P, i, j + 1, g, eos, second), g);
    double out = 0.0;
    for (int j = 0; j < g.ny; ++j) out += face_s(w.P, g.nx, j, g, eos, second).m * g.hr;
    for (int i = 0; i < g.nx; ++i) out += face_r(w.P, i, g.ny, g, eos, second).m * g.hs;
    return out;
}

void check_positive(const SimField& f, const StepWorkspace& w, double t) {
    for (std::size_t k = 0; k < f.rho.size(); ++k) {
        if (!(f.rho[k] > 0.0) || !std::isfinite(f.vx[k]) || !std::isfinite(f.vy[k])) {
            auto last = std::make_shared<SimField>(f);
            last->rho = w.rho0;
            last->vx = w.vx0;
            last->vy = w.vy0;
            const int i = static_cast<int>(k % static_cast<std::size_t>(f.grid.nx));
            const int j = static_cast<int>(k / static_cast<std::size_t>(f.grid.nx));
            std::ostringstream os;
            os << "density positivity lost at cell (" << i << ", " << j << "), t = " << t << ", rho = " << f.rho[k];
            throw StepFailure(os.str(), std::move(last));
        }
    }
}

StepStats advance(SimField& f, double cfl, bool second, double t_limit, StepWorkspace& w, bool parallel) {
    const Eos eos(f.k);
    const SimGrid& g = f.grid;
    w.resize(g);
    StepStats st;
    st.dt = std::min(stable_dt(f, cfl), t_limit - f.t);
    if (!(st.dt > 0.0)) throw PreconditionError("step: t_limit must exceed the field time");
    const double dt = st.dt;
    const auto n = static_cast<long>(g.size());
    auto residual = [&](double t) {
        copy_interior(w.P, f, f.rho.data(), f.vx.data(), f.vy.data(), parallel);
        fill_ghosts(w.P, f, t);
        return parallel ? residual_parallel(w, f, second, eos) : residual_serial(w, f, second, eos);
    };

    w.rho0 = f.rho;
    w.vx0 = f.vx;
    w.vy0 = f.vy;
    const double out0 = residual(f.t);
#pragma omp parallel for if (parallel)
    for (long k = 0; k < n; ++k) {
        f.rho[k] += dt * w.R.rho[k];
        f.vx[k] += dt * w.R.vx[k];
        f.vy[k] += dt * w.R.vy[k];
    }
    check_positive(f, w, f.t);
    if (!second) {
        st.boundary_mass_out = dt * out0;
        f.t += dt;
        return st;
    }
    const double out1 = residual(f.t + dt);
#pragma omp parallel for if (parallel)
    for (long k = 0; k < n; ++k) {
        f.rho[k] = 0.5 * w.rho0[k] + 0.5 * (f.rho[k] + dt * w.R.rho[k]);
        f.vx[k] = 0.5 * w.vx0[k] + 0.5 * (f.vx[k] + dt * w.R.vx[k]);
        f.vy[k] = 0.5 * w.vy0[k] + 0.5 * (f.vy[k] + dt * w.R.vy[k]);
    }
    check_positive(f, w, f.t + dt);
    st.boundary_mass_out = 0.5 * dt * (out0 + out1);
    f.t += dt;
    return st;
}

}  // namespace

double stable_dt(const SimField& f, double cfl) {
    const Eos eos(f.k);
    const SimGrid& g = f.grid;
    const double ws = 1.0 / (g.hs * g.sin_theta), wr = 1.0 / (g.hr * g.sin_theta);
    double rate = 0.0;
    const long n = static_cast<long>(g.size());
#pragma omp parallel for reduction(max : rate)
    for (long k = 0; k < n; ++k) {
        const double c = std::sqrt(eos.g1 * eos.pi(f.rho[k]));
        const double us = std::abs(f.vx[k] * g.n_s.x + f.vy[k] * g.n_s.y) + c;
        const double ur = std::abs(f.vx[k] * g.n_r.x + f.vy[k] * g.n_r.y) + c;
        rate = std::max(rate, us * ws + ur * wr);
    }
    return cfl / rate;
}

StepStats step(SimField& f, double cfl, bool second_order, double t_limit, StepWorkspace* ws) {
    if (ws != nullptr) return advance(f, cfl, second_order, t_limit, *ws, true);
    StepWorkspace local;
    return advance(f, cfl, second_order, t_limit, local, true);
}

StepStats step_reference(SimField& f, double cfl, bool second_order, double t_limit) {
    StepWorkspace local;
    return advance(f, cfl, second_order, t_limit, local, false);
}

}  // namespace shockrefl
