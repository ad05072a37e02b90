#include "shockrefl/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "shockrefl/errors.hpp"
#include "shockrefl/roots.hpp"

namespace shockrefl {

namespace {

constexpr double kGoldenTol = 1e-10;
constexpr double kBetaTol = 1e-14;
constexpr double kCriticalTol = 1e-9;

}  // namespace

double ShockPolar::tau_of_beta(double beta) const {
    const ShockSolution s = oblique_shock_or_trivial(upstream, beta, k);
    return signed_angle(upstream.v, s.downstream.v);
}

ShockSolution ShockPolar::at(double beta) const { return oblique_shock_or_trivial(source, beta, k); }

bool ShockPolar::weak_is_supersonic(double tau) const {
    return (std::abs(tau) < tau_sonic) == weak_supersonic_below_sonic;
}

ShockPolar build_polar(const FluidState& upstream, const GasConstants& k, int n_samples) {
    k.validate();
    if (n_samples < 64) throw DomainError("build_polar: n_samples must be at least 64");
    const double mach = upstream.mach();
    if (!(mach > 1.0)) throw SubsonicUpstreamError("upstream must be supersonic (M_u = " + std::to_string(mach) + ")");

    ShockPolar p;
    p.source = upstream;
    p.upstream = FluidState{upstream.rho, upstream.c, Vec2{upstream.speed(), 0.0}};
    p.k = k;
    p.mach = mach;
    p.beta_max = std::acos(1.0 / mach);

    // Chebyshev nodes of the first kind, generated on one half and mirrored so that the
    // sample set is exactly symmetric under beta -> -beta.
    const int n = n_samples;
    std::vector<double> betas(n);
    for (int i = 0; i < n / 2; ++i) {
        const double b = -p.beta_max * std::cos(pi * (i + 0.5) / n);
        betas[i] = b;
        betas[n - 1 - i] = -b;
    }
    if (n % 2 == 1) betas[n / 2] = 0.0;

    p.samples.reserve(n);
    for (double b : betas) {
        const ShockSolution s = oblique_shock(p.upstream, b, k);
        const auto& d = s.downstream;
        p.samples.push_back({b, d.v, d.rho, d.c, d.mach(), signed_angle(p.upstream.v, d.v)});
    }

    p.tau_star = critical_angle(p, &p.beta_star);
    p.tau_sonic = sonic_angle(p, &p.beta_sonic);
    const double probe = 0.5 * p.tau_sonic;
    const auto probe_sol = solve_for_turn(p, probe);
    p.weak_supersonic_below_sonic = probe_sol.weak.downstream.mach() > 1.0;
    return p;
}

double critical_angle(const ShockPolar& polar, double* beta_star) {
    const auto& s = polar.samples;
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].tau > s[best].tau) best = i;
    const double lo = best == 0 ? -polar.beta_max : s[best - 1].beta;
    const double hi = best + 1 < s.size() ? std::min(s[best + 1].beta, 0.0) : 0.0;
    const auto ext = roots::golden_max([&](double b) { return polar.tau_of_beta(b); }, lo, hi, kGoldenTol);
    if (beta_star) *beta_star = ext.x;
    return ext.fx;
}

double sonic_angle(const ShockPolar& polar, double* beta_sonic) {
    double b_star = polar.beta_star;
    if (b_star == 0.0) critical_angle(polar, &b_star);
    auto mach_minus_one = [&](double b) { return polar.at(b).downstream.mach() - 1.0; };
    // The weak branch runs from the critical point (transonic) to the zero-strength end (M_u > 1).
    const double lo = -polar.beta_max * (1.0 - 1e-12);
    if (!(mach_minus_one(b_star) < 0.0))
        throw NumericalError("sonic_angle: critical-type shock is not transonic");
    const double b = roots::brent(mach_minus_one, lo, b_star, kBetaTol);
    if (beta_sonic) *beta_sonic = b;
    return polar.tau_of_beta(b);
}

TurnSolution solve_for_turn(const ShockPolar& polar, double tau) {
    const double mag = std::abs(tau);
    if (mag > polar.tau_star + kCriticalTol)
        throw DetachmentError("turn angle " + std::to_string(tau) + " exceeds critical angle " +
                              std::to_string(polar.tau_star) + "; no local solution");
    const double sign = tau < 0.0 ? -1.0 : 1.0;
    TurnSolution out;
    if (mag >= polar.tau_star - kCriticalTol) {
        out.critical = true;
        out.weak = out.strong = polar.at(sign * polar.beta_star);
        return out;
    }
    // Roots are located on the positive-tau side (beta < 0) and mirrored afterwards.
    auto f = [&](double b) { return polar.tau_of_beta(b) - mag; };
    const double b_strong = roots::brent(f, polar.beta_star, 0.0, kBetaTol);
    const double b_weak = roots::brent(f, -polar.beta_max, polar.beta_star, kBetaTol);
    out.strong = polar.at(sign * b_strong);
    out.weak = polar.at(sign * b_weak);
    return out;
}

ConvexityReport check_convexity(const ShockPolar& polar) {
    const auto& s = polar.samples;
    ConvexityReport r;
    r.derivative_nonzero = true;
    r.min_cross = std::numeric_limits<double>::infinity();
    r.max_cross = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (!(norm(s[i + 1].v_d - s[i].v_d) > 0.0)) r.derivative_nonzero = false;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
        const double c = cross(s[i + 1].v_d - s[i].v_d, s[i + 2].v_d - s[i + 1].v_d);
        r.min_cross = std::min(r.min_cross, c);
        r.max_cross = std::max(r.max_cross, c);
    }
    r.strictly_convex = (r.min_cross > 0.0) || (r.max_cross < 0.0);
    return r;
}

void write_polar_csv(const ShockPolar& polar, std::ostream& out) {
    const auto old = out.precision(17);
    out << "beta_rad,vdx,vdy,rho_d,c_d,M_d,tau_rad\n";
    for (const auto& s : polar.samples)
        out << s.beta << ',' << s.v_d.x << ',' << s.v_d.y << ',' << s.rho_d << ',' << s.c_d << ','
            << s.mach_d << ',' << s.tau << '\n';
    out.precision(old);
}

}  // namespace shockrefl
