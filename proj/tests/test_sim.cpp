#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "shockrefl/errors.hpp"
#include "shockrefl/io.hpp"
#include "shockrefl/shock.hpp"
#include "shockrefl/sim.hpp"

using namespace shockrefl;

namespace {

SimConfig anchor(double theta_deg, int n) {
    SimConfig c;
    c.reflection.M1 = 3.0;
    c.reflection.theta = rad(theta_deg);
    c.reflection.alpha = rad(142.9 - theta_deg);
    c.nx = n;
    c.ny = n;
    c.min_travel_cells = 0;
    return c;
}

// Rectangular strip with a normal shock reflected off the wall s = 0: sector 2 at rest next to the
// wall, sector 1 streaming towards it. The shock moves away from the wall with speed S.
struct WallShock {
    SimField f;
    double S;
};

WallShock wall_shock(double zn_u, int nx, int ny, double t0) {
    const GasConstants k{};
    const auto ns = normal_shock(zn_u, 1.0, 1.0, k);
    WallShock w;
    w.S = ns.zn_d;
    SimField& f = w.f;
    f.k = k;
    SimGrid& g = f.grid;
    g.nx = nx;
    g.ny = ny;
    g.hs = g.hr = 1.0 / nx;
    g.b = {0.0, 1.0};
    g.sin_theta = 1.0;
    g.area = g.hs * g.hr;
    g.n_s = rot90(g.b);
    g.n_r = {0.0, 1.0};
    f.exact.s1 = make_state(1.0, {zn_u - ns.zn_d, 0.0}, k);
    f.exact.s2 = make_state(ns.rho_d, {0.0, 0.0}, k);
    f.exact.n = {1.0, 0.0};
    f.exact.sigma = -w.S;
    f.t = t0;
    f.rho.resize(g.size());
    f.vx.resize(g.size());
    f.vy.resize(g.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const FluidState& s = f.exact.at(g.center(i, j), t0);
            const auto q = g.index(i, j);
            f.rho[q] = s.rho;
            f.vx[q] = s.v.x;
            f.vy[q] = s.v.y;
        }
    return w;
}

// Synthetic density field on the grid of `base`: fronts smeared over a few cells like captured
// shocks, meeting at row r_t above the wall at s_t (cells). The incident slopes outward by ki cells
// per row, the reflected front inward by kr, and a stem perpendicular to the wall lies below the junction.
SimField synthetic(const SimField& base, double s_t, double r_t, double ki, double kr) {
    SimField f = base;
    const SimGrid& g = f.grid;
    auto H = [](double d) { return 0.5 * (1.0 + std::tanh(d / 1.5)); };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double s = i + 0.5, r = j + 0.5;
            const double rho = r < r_t ? 1.0 + 4.0 * H(s_t - s)
                                       : 1.0 + 2.0 * H(s_t + (r - r_t) * ki - s) + 2.0 * H(s_t - (r - r_t) * kr - s);
            f.rho[g.index(i, j)] = rho;
        }
    return f;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("config validation") {
    auto c = anchor(137.9, 64);
    c.cfl = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = anchor(137.9, 64);
    c.t0 = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = anchor(137.9, 64);
    c.min_travel_cells = 200;
    CHECK_THROWS_AS(c.validate(), DomainError);  // 64 cells cannot resolve 200 cells of travel
    CHECK_NOTHROW(anchor(137.9, 400).validate());
    auto d = anchor(137.9, 400);
    d.min_travel_cells = 200;
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("initial data is the exact two-state configuration") {
    const auto c = anchor(137.9, 64);
    const auto f = setup_initial(c);
    const auto& e = f.exact;
    CHECK(e.s1.c == doctest::Approx(sound_speed(e.s1.rho, f.k)).epsilon(1e-14));
    CHECK(e.s2.c == doctest::Approx(sound_speed(e.s2.rho, f.k)).epsilon(1e-14));
    // sector 2 slides along the opposite wall, sector 1 along the reflection wall
    CHECK(std::abs(cross(e.s2.v, f.grid.b)) < 1e-12);
    CHECK(std::abs(e.s1.v.y) < 1e-15);
    int n1 = 0, n2 = 0;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const auto k = f.grid.index(i, j);
            const bool down = dot(f.grid.center(i, j), e.n) > e.sigma * f.t;
            const FluidState& s = down ? e.s2 : e.s1;
            CHECK(f.rho[k] == s.rho);
            CHECK(f.vx[k] == s.v.x);
            CHECK(f.vy[k] == s.v.y);
            (down ? n2 : n1)++;
        }
    CHECK(n1 > 0);
    CHECK(n2 > 0);

    auto tiny = anchor(137.9, 64);
    tiny.extent = 0.01;
    CHECK_THROWS_AS(setup_initial(tiny), GeometryError);
}

TEST_CASE("state at rest is a fixed point") {
    auto f = setup_initial(anchor(147.9, 48));
    const FluidState rest = make_state(2.0, {0.0, 0.0}, f.k);
    f.exact.s1 = f.exact.s2 = rest;
    std::fill(f.rho.begin(), f.rho.end(), rest.rho);
    std::fill(f.vx.begin(), f.vx.end(), 0.0);
    std::fill(f.vy.begin(), f.vy.end(), 0.0);
    for (int n = 0; n < 5; ++n) step(f, 0.8, true, 10.0);
    for (std::size_t k = 0; k < f.rho.size(); ++k) {
        CHECK(std::abs(f.rho[k] - rest.rho) < 1e-13);
        CHECK(std::abs(f.vx[k]) < 1e-13);
        CHECK(std::abs(f.vy[k]) < 1e-13);
    }
}

TEST_CASE("1-D wall-reflected normal shock moves at the exact speed") {
    for (double zn : {1.5, 2.0, 3.0}) {
        CAPTURE(zn);
        auto w = wall_shock(zn, 2000, 64, 0.05);
        const double s0 = front_position(w.f, 0), t0 = w.f.t;
        // first 10 steps: the front integral moves exactly as long as its window edges stay constant
        for (int n = 0; n < 10; ++n) step(w.f, 0.8, true, 10.0);
        const double s10 = front_position(w.f, 0);
        CHECK(std::abs((s10 - s0) / (w.f.t - t0) - w.S) < 0.02 * w.S);
        for (int n = 10; n < 500; ++n) step(w.f, 0.8, true, 10.0);
        const double s500 = front_position(w.f, 0);
        CHECK(std::abs((s500 - s0) / (w.f.t - t0) - w.S) < 0.01 * w.S);
    }
}

TEST_CASE("captured shock thickness scales with the cell size") {
    // cells with intermediate density across the front, coarse vs fine
    auto width = [](int nx) {
        auto w = wall_shock(2.0, nx, 16, 0.05);
        while (w.f.t < 0.6) step(w.f, 0.8, true, 0.6);
        const double r1 = w.f.exact.s1.rho, r2 = w.f.exact.s2.rho;
        int cells = 0;
        for (int i = 0; i < nx; ++i) {
            const double phi = (w.f.rho[w.f.grid.index(i, 0)] - r1) / (r2 - r1);
            cells += phi > 0.1 && phi < 0.9;
        }
        return cells;
    };
    const int coarse = width(200), fine = width(400);
    CHECK(coarse >= 1);
    CHECK(std::abs(fine - coarse) <= 1);  // constant in cells, so halved in length
}

TEST_CASE("mass changes only by boundary fluxes") {
    for (bool second : {true, false}) {
        auto f = setup_initial(anchor(147.9, 96));
        for (int n = 0; n < 40; ++n) {
            const double m0 = total_mass(f);
            const auto st = step(f, 0.8, second, 10.0);
            const double m1 = total_mass(f);
            CHECK(std::abs(m1 - (m0 - st.boundary_mass_out)) < 1e-12 * m0);
        }
    }
}

TEST_CASE("far-field cells keep the exact states") {
    auto f = setup_initial(anchor(137.9, 128));
    const int steps = 6;
    for (int n = 0; n < steps; ++n) step(f, 0.8, true, 10.0);
    // second-order RK2 reaches 4 cells per step; stay outside that from the shock and the corner region
    const double reach = 4.0 * steps + 2.0;
    const SimGrid& g = f.grid;
    const double h = std::max(g.hs, g.hr);
    int checked = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 x = g.center(i, j);
            const double d = dot(x, f.exact.n) - f.exact.sigma * f.t;
            if (std::abs(d) < reach * h) continue;
            const bool down = d > 0.0;
            // sector 2 meets the reflection wall between the corner and the reflection point
            if (down && j < reach) continue;
            const FluidState& s = down ? f.exact.s2 : f.exact.s1;
            const auto k = g.index(i, j);
            CHECK(std::abs(f.rho[k] - s.rho) < 1e-6);
            CHECK(std::abs(f.vx[k] - s.v.x) < 1e-6);
            CHECK(std::abs(f.vy[k] - s.v.y) < 1e-6);
            ++checked;
        }
    CHECK(checked > 1000);
}

TEST_CASE("parallel step equals the serial reference") {
    for (bool second : {true, false}) {
        CAPTURE(second);
        auto a = setup_initial(anchor(147.9, 80));
        auto b = a;
        auto ws = make_workspace();
        for (int n = 0; n < 8; ++n) {
            const auto sa = step(a, 0.8, second, 10.0, ws.get());
            const auto sb = step_reference(b, 0.8, second, 10.0);
            CHECK(sa.dt == sb.dt);
            CHECK(sa.boundary_mass_out == sb.boundary_mass_out);
        }
        CHECK(a.t == b.t);
        CHECK(a.rho == b.rho);
        CHECK(a.vx == b.vx);
        CHECK(a.vy == b.vy);
    }
}

TEST_CASE("step stops at the time limit") {
    auto f = setup_initial(anchor(137.9, 48));
    const double dt = stable_dt(f, 0.8);
    const double limit = f.t + 0.25 * dt;
    const auto st = step(f, 0.8, true, limit);
    CHECK(st.dt == doctest::Approx(0.25 * dt));
    CHECK(f.t == limit);
    CHECK_THROWS_AS(step(f, 0.8, true, limit), PreconditionError);
}

TEST_CASE("non-finite state raises StepFailure with the last good field") {
    auto f = setup_initial(anchor(137.9, 48));
    f.vx[f.grid.index(10, 10)] = std::nan("");
    const auto before = f;
    try {
        step(f, 0.8, true, 10.0);
        FAIL("expected StepFailure");
    } catch (const StepFailure& e) {
        CHECK(std::string(e.what()).find("positivity") != std::string::npos);
        CHECK(e.last_good().rho == before.rho);
        CHECK(e.last_good().t == before.t);
        CHECK(field_csv(e.last_good()).rfind("x,y,xi,eta,rho,vx,vy,L,shock_indicator\n", 0) == 0);
    }
}

TEST_CASE("synthetic two-line field is RR") {
    auto base = setup_initial(anchor(137.9, 200));
    base.t = 1.0;
    const auto f = synthetic(base, 120.0, 0.0, 0.5, 1.5);
    const auto p = classify_pattern(f);
    CAPTURE(p.note);
    CHECK(p.classification == PatternClass::RR);
    CHECK(std::abs(p.junction_rows) < 2.0);
    CHECK(p.stem_length == 0.0);
    CHECK(p.point.y == 0.0);
}

TEST_CASE("synthetic three-line field is MR with the stem height") {
    auto base = setup_initial(anchor(137.9, 200));
    base.t = 1.0;
    const auto f = synthetic(base, 120.0, 10.0, 0.5, 1.5);
    const auto p = classify_pattern(f);
    CAPTURE(p.note);
    CHECK(p.classification == PatternClass::MR);
    CHECK(p.stem_cells == doctest::Approx(10.0).epsilon(0.1));
    CHECK(p.stem_length > 0.0);
    // junction sits above the stem foot
    const Vec2 foot = f.grid.point(120.0 * f.grid.hs, 0.0);
    CHECK(std::abs(p.point.x - (foot.x + 10.0 * f.grid.hr * f.grid.b.x)) < 2.0 * f.grid.hs);
}

TEST_CASE("classification of featureless or undeveloped fields") {
    auto base = setup_initial(anchor(137.9, 200));
    base.t = 1.0;
    auto flat = base;
    std::fill(flat.rho.begin(), flat.rho.end(), 1.0);
    CHECK(classify_pattern(flat).classification == PatternClass::undetermined);
    const auto early = setup_initial(anchor(137.9, 200));
    CHECK_THROWS_AS(classify_pattern(early), PreconditionError);
}

TEST_CASE("field dump and pattern json") {
    auto f = setup_initial(anchor(137.9, 16));
    const auto csv = field_csv(f);
    CHECK(csv.rfind("x,y,xi,eta,rho,vx,vy,L,shock_indicator\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 16 * 16);
    PatternResult p;
    p.classification = PatternClass::MR;
    p.point = {-0.7, 0.04};
    p.stem_length = 0.04;
    const auto j = nlohmann::json::parse(pattern_json(p));
    CHECK(j["classification"] == "MR");
    CHECK(j["point"][0].get<double>() == -0.7);
    CHECK(j["stem_length"].get<double>() == 0.04);
}

}
