// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
// Optional arguments select criteria by number, e.g. `acceptance 1 3 7`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shockrefl/errors.hpp"
#include "shockrefl/polar.hpp"
#include "shockrefl/reflection.hpp"
#include "shockrefl/shock.hpp"
#include "shockrefl/sim.hpp"
#include "shockrefl/transition_map.hpp"

using namespace shockrefl;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const GasConstants air{1.4, 1.0, 1.0};

ShockPolar polar_for(double M, const GasConstants& k = air) { return build_polar(FluidState{1.0, 1.0, {M, 0.0}}, k); }

ReflectionConfig reflection(double M1, double alpha_deg, double theta_deg) {
    ReflectionConfig c;
    c.M1 = M1;
    c.alpha = rad(alpha_deg);
    c.theta = rad(theta_deg);
    c.k = air;
    return c;
}

// theta + alpha = 142.9 deg: the strong-type trivial configuration turned by +-5 deg
ReflectionConfig anchor(double theta_deg) { return reflection(3.0, 142.9 - theta_deg, theta_deg); }

Outcome rh_residuals() {
    Timer t;
    double worst = 0.0;
    int bad = 0, n = 0;
    for (double M : {1.1, 1.5, 2.0, 3.0, 5.0}) {
        const FluidState up{1.0, 1.0, {M, 0.0}};
        const double bmax = std::acos(1.0 / M);
        for (int i = 0; i < 50; ++i) {
            const double b = -bmax + 2.0 * bmax * (i + 0.5) / 50.0;
            const auto r = shock_residuals(oblique_shock(up, b, air), air);
            worst = std::max(worst, r.max_relative());
            bad += !(r.max_relative() < 1e-10 && r.admissible);
            ++n;
        }
    }
    const double s = t.seconds();
    return {bad == 0 && s < 5.0, fmt("%d shocks, max relative residual %.2e, %d violations, %.2f s", n, worst, bad, s)};
}

Outcome oracle_equivalence() {
    Timer t;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> um(1.2, 5.0), uf(0.02, 0.98);
    struct Instance {
        double M, frac;
    };
    std::vector<Instance> inst(100);
    for (auto& i : inst) {
        i.M = um(rng);
        i.frac = uf(rng);
    }
    std::vector<double> err(inst.size(), 0.0);
    double solve_seconds = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : solve_seconds)
    for (std::size_t i = 0; i < inst.size(); ++i) {
        Timer ts;
        const auto p = polar_for(inst[i].M);
        const double tau = inst[i].frac * p.tau_star;
        const auto s = solve_for_turn(p, tau);
        solve_seconds += ts.seconds();
        const auto dense = oracle::dense_polar(inst[i].M, 1.4, 1000000);
        const auto roots = oracle::dense_turn(dense, tau);
        err[i] = std::max(std::abs(s.strong.beta - roots.beta_strong), std::abs(s.weak.beta - roots.beta_weak));
        if (std::isnan(err[i])) err[i] = INFINITY;
    }
    const double worst = *std::max_element(err.begin(), err.end());
    const double s = t.seconds();
    return {worst < 1e-6 && s < 60.0,
            fmt("100 instances, max |beta - beta_oracle| %.2e rad, library %.2f s, total %.1f s", worst, solve_seconds, s)};
}

Outcome polar_structure() {
    int bad = 0, cases = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (bad++ == 0) first = what;
    };
    for (double g : {1.2, 1.4, 5.0 / 3.0}) {
        const GasConstants k{g, 1.0, 1.0};
        for (double M : {1.2, 2.0, 3.0, 5.0}) {
            ++cases;
            const auto p = polar_for(M, k);
            const std::string id = fmt("gamma %.3f M %.1f", g, M);
            if (!check_convexity(p).strictly_convex) fail(id + ": not strictly convex");
            if (!(0.0 < p.tau_sonic && p.tau_sonic < p.tau_star && p.tau_star < pi / 2)) fail(id + ": angle ordering");
            for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
                const double tau = f * p.tau_star;
                const auto s = solve_for_turn(p, tau);
                const auto m = solve_for_turn(p, -tau);
                if (!(s.strong.downstream.speed() < s.weak.downstream.speed())) fail(id + ": |v_d| ordering");
                if (!(s.strong.downstream.mach() < 1.0)) fail(id + ": strong branch supersonic");
                if (std::abs(m.weak.beta + s.weak.beta) > 1e-10 || std::abs(m.strong.beta + s.strong.beta) > 1e-10 ||
                    std::abs(m.strong.downstream.v.y + s.strong.downstream.v.y) > 1e-10 ||
                    std::abs(m.weak.downstream.v.y + s.weak.downstream.v.y) > 1e-10)
                    fail(id + ": mirror symmetry");
            }
        }
    }
    return {bad == 0, bad == 0 ? fmt("%d polars: convex, mirror symmetric, branch order, 0 < tau_s < tau* < 90 deg", cases)
                               : fmt("%d violations, first: ", bad) + first};
}

Outcome limit_behaviour() {
    const double a = polar_for(1.001).tau_star, b = polar_for(1.01).tau_star, c = polar_for(1.1).tau_star;
    return {0.0 < a && a < b && b < c,
            fmt("tau*(1.001) = %.4g deg, tau*(1.01) = %.4g deg, tau*(1.1) = %.4g deg", deg(a), deg(b), deg(c))};
}

Outcome trivial_angle_anchor() {
    const double th = deg(trivial_strong_theta(3.0, 0.0, air));
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i <= 8; ++i) {
        const double v = deg(trivial_strong_theta(2.8 + 0.05 * i, 0.0, air));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool in_band = th >= 141.9 && th <= 143.9;
    const bool attained = lo <= 142.9 && 142.9 <= hi;
    return {in_band && attained, fmt("trivial_strong_theta(M1 = 3) = %.4f deg (band [141.9, 143.9]); "
                                     "scan M1 in [2.8, 3.2]: %.3f .. %.3f deg, 142.9 %s",
                                     th, lo, hi, attained ? "attained" : "not attained")};
}

Outcome vvert_property() {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> um(1.5, 5.0), us(0.0, 1.0), ud(0.2, 10.0);
    int hits = 0, bad = 0;
    for (int i = 0; i < 400 && hits < 40; ++i) {
        const double M1 = um(rng);
        const double lo = deg(detachment_theta(M1, 0.0, air));
        const double sum = lo + 0.02 + us(rng) * (90.0 + deg(std::acos(1.0 / M1)) - lo - 0.5);
        const auto base = local_rr(reflection(M1, sum - 140.0, 140.0));
        if (!base.exists) continue;
        const double theta = 90.0 + deg(base.phi_strong) + ud(rng);
        LocalRR rr;
        try {
            rr = local_rr(reflection(M1, sum - theta, theta));
        } catch (const DomainError&) {
            continue;
        }
        if (!rr.exists || rr.angle_condition_ok) continue;
        ++hits;
        const double x0 = reflection_point_abscissa(rr);
        double prev = vertical_shock_downstream(rr, x0).v_d_wall.x;
        bool ok = prev > 0.0;
        for (double f : {0.02, 0.05, 0.1}) {
            try {
                const double v = vertical_shock_downstream(rr, x0 + f * rr.geometry.corner_distance).v_d_wall.x;
                ok = ok && v > prev;
                prev = v;
            } catch (const InadmissibleAngleError&) {
                break;
            }
        }
        bad += !ok;
    }
    return {hits >= 20 && bad == 0, fmt("%d configs with local RR and violated angle condition, %d violations", hits, bad)};
}

Outcome criterion_disagreement() {
    const auto hi = local_rr(anchor(147.9));
    const auto lo = local_rr(anchor(137.9));
    const auto p = [](const LocalRR& r, Criterion c) { return std::string(to_string(predict_transition(r, c))); };
    const bool ok = hi.exists && p(hi, Criterion::detachment) == "RR" && p(hi, Criterion::angle_condition) == "MR" &&
                    lo.exists && p(lo, Criterion::detachment) == "RR" && p(lo, Criterion::angle_condition) == "RR";
    return {ok, "147.9: detachment " + p(hi, Criterion::detachment) + ", new " + p(hi, Criterion::angle_condition) +
                    "; 137.9: detachment " + p(lo, Criterion::detachment) + ", new " +
                    p(lo, Criterion::angle_condition)};
}

double theta_at(const Curve& c, double m1) {
    const auto& p = c.points;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i].m1 <= m1 && m1 <= p[i + 1].m1) {
            if (p[i + 1].m1 == p[i].m1) return p[i].theta;
            const double s = (m1 - p[i].m1) / (p[i + 1].m1 - p[i].m1);
            return p[i].theta + s * (p[i + 1].theta - p[i].theta);
        }
    return std::nan("");
}

const CurvePoint* point_at(const Curve& c, double m1) {
    for (const auto& p : c.points)
        if (p.m1 == m1) return &p;
    return nullptr;
}

Outcome transition_map() {
    SweepOptions o;  // gamma 1.4, alpha 0, 128 x 128
    Timer t;
    const auto m = sweep(o);
    const double s128 = t.seconds();
    std::vector<std::string> issues;
    const auto& detach = m.curve("detach");
    const auto& sonic = m.curve("sonic");
    const auto& weak = m.curve("weak trivial");
    const auto& strong = m.curve("strong trivial");
    const auto& angle = m.curve("angle-condition boundary");

    // neither type exists below detach; weak-type reflection supersonic above sonic, transonic below
    int below = 0, sonic_bad = 0;
    for (std::size_t i = 0; i < m.m1_grid.size(); ++i) {
        const auto* d = point_at(detach, m.m1_grid[i]);
        if (!d) {
            issues.push_back("detach missing at an M1 row");
            continue;
        }
        const auto* so = point_at(sonic, m.m1_grid[i]);
        for (std::size_t j = 0; j < m.theta_grid.size(); ++j) {
            const auto& c = m.at(i, j);
            if (!c.defined) continue;
            below += c.theta < d->theta && c.exists;
            if (c.exists && so) sonic_bad += c.weak_supersonic != (c.theta > so->theta);
        }
    }
    if (below) issues.push_back(fmt("%d cells with local RR below detach", below));
    if (sonic_bad) issues.push_back(fmt("%d cells on the wrong side of sonic", sonic_bad));
    // every curve lies above detach; the solid boundary follows strong trivial, else detach
    int layering = 0;
    for (const Curve* c : {&sonic, &weak, &strong})
        for (const auto& p : c->points) layering += !(p.theta > point_at(detach, p.m1)->theta);
    for (const auto& p : angle.points) {
        const auto* st = point_at(strong, p.m1);
        const double ref = st ? st->theta : point_at(detach, p.m1)->theta;
        layering += std::abs(p.theta - ref) > 1e-8;
    }
    if (layering) issues.push_back(fmt("%d layering violations", layering));
    // weak trivial runs into the strong trivial curve where it crosses detach, changing type on the way
    if (weak.points.empty() || strong.points.empty() || !(weak.points.back().m1 < strong.points.front().m1))
        issues.push_back("weak/strong trivial curves do not join at the fold");
    bool transonic = false, supersonic = false;
    for (const auto& p : weak.points) {
        const double so = theta_at(sonic, p.m1);
        (p.theta > so ? supersonic : transonic) = true;
    }
    if (!(transonic && supersonic)) issues.push_back("weak trivial curve does not cross sonic");

    // refinement
    SweepOptions f = o;
    f.n_m1 = f.n_theta = 256;
    Timer t2;
    const auto fine = sweep(f);
    const double s256 = t2.seconds();
    const double cell = m.theta_grid[1] - m.theta_grid[0];
    double worst = 0.0;
    for (auto name : kCurveNames)
        for (const auto& p : fine.curve(name).points) {
            const double th = theta_at(m.curve(name), p.m1);
            if (!std::isnan(th)) worst = std::max(worst, std::abs(p.theta - th));
        }
    if (!(worst < cell)) issues.push_back("refinement moves a curve by a coarse cell or more");
    if (!(s128 < 300.0)) issues.push_back("128 x 128 sweep over 5 min");

    std::string d = fmt("128^2 in %.1f s, 256^2 in %.1f s, max curve shift %.3g coarse cells", s128, s256, worst / cell);
    for (const auto& i : issues) d += "; " + i;
    return {issues.empty(), d};
}

struct SimRun {
    std::string label;
    RunOutput out;
};

SimRun sim_run(double theta, int n, bool second, int min_travel) {
    SimConfig c;
    c.reflection = anchor(theta);
    c.nx = c.ny = n;
    c.second_order = second;
    c.min_travel_cells = min_travel;
    SimRun r;
    r.label = fmt("%.1f/%d/%s", theta, n, second ? "o2" : "o1");
    r.out = run(c);
    std::printf("       run %-16s %-12s %5d steps %7.1f s  junction %.2f rows\n", r.label.c_str(),
                std::string(to_string(r.out.pattern.classification)).c_str(), r.out.steps, r.out.seconds,
                r.out.pattern.junction_rows);
    std::fflush(stdout);
    return r;
}

// 400^2 second-order anchors, shared by the last two criteria
const std::vector<SimRun>& anchor_runs() {
    static const std::vector<SimRun> runs = {sim_run(147.9, 400, true, 200), sim_run(137.9, 400, true, 200)};
    return runs;
}

Outcome sim_anchors() {
    const auto& a = anchor_runs();
    std::vector<std::string> issues;
    const PatternClass want[2] = {PatternClass::MR, PatternClass::RR};
    std::string d;
    for (int i = 0; i < 2; ++i) {
        d += fmt("%s %s (%.0f s); ", a[i].label.c_str(), std::string(to_string(a[i].out.pattern.classification)).c_str(),
                 a[i].out.seconds);
        if (a[i].out.pattern.classification != want[i]) issues.push_back(a[i].label + " misclassified");
        if (!(a[i].out.seconds < 600.0)) issues.push_back(a[i].label + " over 10 min");
    }
    // resolution halving (200^2 meets only half the travel requirement) and first order
    const double th[2] = {147.9, 137.9};
    for (int i = 0; i < 2; ++i)
        for (const auto& r : {sim_run(th[i], 200, true, 100), sim_run(th[i], 400, false, 200)}) {
            d += r.label + " " + std::string(to_string(r.out.pattern.classification)) + "; ";
            if (r.out.pattern.classification != want[i]) issues.push_back(r.label + " differs");
        }
    for (const auto& i : issues) d += i + "; ";
    d.resize(d.size() - 2);
    return {issues.empty(), d};
}

Outcome captured_shock() {
    const auto& a = anchor_runs();
    bool ok = true;
    std::string d;
    for (const auto& r : a) {
        const double rel = std::abs(r.out.front_speed - r.out.sigma) / std::abs(r.out.sigma);
        ok = ok && r.out.front_speed != 0.0 && rel < 0.02 && r.out.max_mass_defect < 1e-12;
        d += fmt("%s: front speed %.6f vs sigma %.6f (rel %.2e), max mass defect %.2e; ", r.label.c_str(),
                 r.out.front_speed, r.out.sigma, rel, r.out.max_mass_defect);
    }
    d.resize(d.size() - 2);
    return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"RH residual suite", rh_residuals},
        {"oracle equivalence", oracle_equivalence},
        {"polar structure", polar_structure},
        {"limit behaviour", limit_behaviour},
        {"strong-trivial anchor", trivial_angle_anchor},
        {"vertical-shock property", vvert_property},
        {"criterion disagreement", criterion_disagreement},
        {"transition map", transition_map},
        {"simulation anchors", sim_anchors},
        {"captured-shock consistency", captured_shock},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
