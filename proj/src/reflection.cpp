#include "shockrefl/reflection.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "shockrefl/errors.hpp"
#include "shockrefl/roots.hpp"

namespace shockrefl {

namespace {

constexpr double kDetachTol = 1e-9;
// Tolerance on the 90 degree comparison so that the trivial configuration itself counts as satisfied.
constexpr double kRightAngleTol = 1e-9;
constexpr double kThetaTol = 1e-13;
constexpr int kThetaScan = 361;

Vec2 into_fluid(const ShockSolution& s) { return s.t.y >= 0.0 ? s.t : -s.t; }

}  // namespace

void ReflectionConfig::validate() const {
    k.validate();
    if (!(M1 > 1.0)) throw DomainError("M1 must exceed 1, got " + std::to_string(M1));
    if (!(theta > 0.0 && theta < pi)) throw DomainError("theta must lie in (0, 180) deg");
    if (!(rho1 > 0.0) || !(c1 > 0.0)) throw DomainError("sector-1 rho and c must be positive");
    if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
}

IncidentSetup canonical_geometry(const ReflectionConfig& cfg, Vec2 shift) {
    cfg.validate();
    const FluidState s1{cfg.rho1, cfg.c1, {cfg.M1 * cfg.c1, 0.0}};
    const double phi_i = cfg.theta + cfg.alpha;
    const double beta_i = phi_i - 0.5 * pi;
    if (beta_i < 0.0) {
        std::ostringstream os;
        os << "incident shock direction " << deg(phi_i) << " deg does not face the reflection wall "
           << "(need theta + alpha >= 90 deg)";
        throw GeometryError(os.str());
    }
    if (!(std::cos(beta_i) * cfg.M1 > 1.0))
        throw InadmissibleAngleError("incident shock angle leaves a subsonic normal component for M1 = " +
                                     std::to_string(cfg.M1));
    IncidentSetup out;
    out.incident = oblique_shock(s1, beta_i, cfg.k);
    const Vec2 v2 = out.incident.downstream.v;

    // The opposite wall passes through xi = v2 in the reflection-point frame (slip for sector 2).
    const double xc = v2.x - v2.y * std::cos(cfg.theta) / std::sin(cfg.theta);
    if (!(xc > 0.0)) {
        std::ostringstream os;
        os << "corner does not lie beyond the reflection point (x_c = " << xc << ")";
        throw GeometryError(os.str());
    }

    Geometry& g = out.geometry;
    g.corner = -shift;
    g.reflection_wall = {-1.0, 0.0};
    g.opposite_wall = unit_from_angle(cfg.theta);
    g.corner_distance = xc;
    g.xi_R = g.corner + xc * g.reflection_wall;
    g.incident_dir = unit_from_angle(phi_i);
    g.incident_normal = out.incident.n;
    g.incident_speed = shock_speed(g.xi_R, g.incident_normal);
    g.frame_velocity = Vec2{xc, 0.0} + shift;

    const double den = cross(g.incident_dir, g.opposite_wall);
    if (std::abs(den) > 1e-14) {
        // xi_R + lam u = corner + mu d
        const Vec2 r = g.corner - g.xi_R;
        const double lam = cross(r, g.opposite_wall) / den;
        const double mu = cross(r, g.incident_dir) / den;
        if (lam > 0.0 && mu > 0.0) {
            g.incident_meets_opposite = true;
            g.xi_P = g.xi_R + lam * g.incident_dir;
        }
    }
    return out;
}

LocalRR local_rr(const ReflectionConfig& cfg, int polar_samples) {
    const auto setup = canonical_geometry(cfg);
    LocalRR rr;
    rr.cfg = cfg;
    rr.geometry = setup.geometry;
    rr.incident = setup.incident;
    rr.sector1 = setup.incident.upstream;
    rr.sector2 = setup.incident.downstream;
    if (!(rr.sector2.mach() > 1.0)) {
        std::ostringstream os;
        os << "sector 2 is not supersonic at the reflection point (M2 = " << rr.sector2.mach() << ")";
        throw NoReflectedPolarError(os.str());
    }
    rr.tau_required = signed_angle(rr.sector2.v, {1.0, 0.0});

    const ShockPolar polar = build_polar(rr.sector2, cfg.k, polar_samples);
    rr.tau_star = polar.tau_star;
    rr.tau_sonic = polar.tau_sonic;
    if (std::abs(rr.tau_required) > polar.tau_star + kDetachTol) return rr;

    const TurnSolution turn = solve_for_turn(polar, rr.tau_required);
    rr.exists = true;
    rr.critical = turn.critical;
    rr.weak = turn.weak;
    rr.strong = turn.strong;
    rr.sector3_weak = turn.weak.downstream;
    rr.sector3_strong = turn.strong.downstream;
    rr.phi_weak = angle_of(into_fluid(turn.weak));
    rr.phi_strong = angle_of(into_fluid(turn.strong));
    rr.angle_weak = cfg.theta - rr.phi_weak;
    rr.angle_strong = cfg.theta - rr.phi_strong;
    rr.weak_transonic = turn.weak.downstream.mach() < 1.0;
    rr.angle_condition_ok = rr.angle_strong <= 0.5 * pi + kRightAngleTol;
    return rr;
}

bool angle_condition(const LocalRR& rr) {
    if (!rr.exists) throw PreconditionError("angle_condition: no local regular reflection");
    return rr.angle_condition_ok;
}

double perpendicularity_residual(const LocalRR& rr, Branch b) {
    if (!rr.exists) throw PreconditionError("perpendicularity_residual: no local regular reflection");
    return (b == Branch::strong ? rr.angle_strong : rr.angle_weak) - 0.5 * pi;
}

namespace {

std::optional<LocalRR> try_local_rr(double M1, double alpha, double theta, const GasConstants& k) {
    ReflectionConfig cfg;
    cfg.M1 = M1;
    cfg.alpha = alpha;
    cfg.theta = theta;
    cfg.k = k;
    try {
        LocalRR rr = local_rr(cfg);
        if (rr.exists) return rr;
    } catch (const DomainError&) {
    }
    return std::nullopt;
}

struct ThetaWindow {
    double lo, hi;
};

ThetaWindow admissible_window(double M1, double alpha) {
    const double beta_max = std::acos(1.0 / M1);
    return {std::max(0.5 * pi - alpha, 1e-6), std::min(0.5 * pi - alpha + beta_max, pi - 1e-6)};
}

}  // namespace

double detachment_theta(double M1, double alpha, const GasConstants& k) {
    const auto [lo, hi] = admissible_window(M1, alpha);
    double prev = lo;
    for (int i = 1; i < kThetaScan; ++i) {
        const double th = lo + (hi - lo) * i / kThetaScan;
        if (try_local_rr(M1, alpha, th, k)) {
            double a = prev, b = th;
            if (i == 1 && try_local_rr(M1, alpha, a, k)) return a;
            while (b - a > kThetaTol * std::max(1.0, b)) {
                const double mid = 0.5 * (a + b);
                (try_local_rr(M1, alpha, mid, k) ? b : a) = mid;
            }
            return b;
        }
        prev = th;
    }
    throw NotFoundError("detachment_theta: no local RR for M1 = " + std::to_string(M1));
}

double trivial_theta(double M1, double alpha, const GasConstants& k, Branch b) {
    const double hi = admissible_window(M1, alpha).hi;
    const double th_d = detachment_theta(M1, alpha, k);
    auto residual = [&](double theta) -> std::optional<double> {
        const auto rr = try_local_rr(M1, alpha, theta, k);
        if (!rr) return std::nullopt;
        return perpendicularity_residual(*rr, b);
    };
    // Near detachment the two branches separate like sqrt(theta - theta_d); cluster the scan there.
    std::optional<double> prev;
    double prev_theta = th_d;
    for (int i = 0; i < kThetaScan; ++i) {
        const double s = static_cast<double>(i) / kThetaScan;
        const double th = th_d + (hi - th_d) * s * s * s;
        const auto r = residual(th);
        if (r && *r == 0.0) return th;
        if (r && prev && ((*r > 0.0) != (*prev > 0.0))) {
            return roots::brent([&](double x) {
                const auto v = residual(x);
                if (!v) throw NumericalError("trivial_theta: local RR vanished inside the bracket");
                return *v;
            }, prev_theta, th, kThetaTol);
        }
        prev = r;
        prev_theta = th;
    }
    std::ostringstream os;
    os << "trivial_theta: no " << (b == Branch::strong ? "strong" : "weak")
       << "-type perpendicular configuration for M1 = " << M1 << ", alpha = " << deg(alpha) << " deg";
    throw NotFoundError(os.str());
}

double reflection_point_abscissa(const LocalRR& rr) {
    return dot(rr.geometry.xi_R - rr.geometry.corner, -rr.geometry.opposite_wall);
}

VerticalShock vertical_shock_downstream(const LocalRR& rr, double xi_x) {
    if (!rr.exists) throw PreconditionError("vertical_shock_downstream: no local regular reflection");
    const Geometry& g = rr.geometry;
    const Vec2 ex = -g.opposite_wall;
    const Vec2 ey = rot90(g.opposite_wall);
    const Vec2 v2 = g.to_frame(rr.sector2.v);
    VerticalShock vs;
    vs.xi_x = xi_x;
    vs.zn_u = dot(v2, ex) - (xi_x + dot(g.corner, ex));
    if (!(vs.zn_u > rr.sector2.c)) {
        std::ostringstream os;
        os << "vertical shock at xi_x = " << xi_x << " has subsonic upstream normal pseudo-velocity "
           << vs.zn_u << " (c2 = " << rr.sector2.c << ")";
        throw InadmissibleAngleError(os.str());
    }
    const auto ns = normal_shock(vs.zn_u, rr.sector2.rho, rr.sector2.c, rr.cfg.k);
    vs.zn_d = ns.zn_d;
    vs.v_d = v2 + (ns.zn_d - vs.zn_u) * ex;
    vs.v_d_wall = {dot(vs.v_d, ex), dot(vs.v_d, ey)};
    return vs;
}

Pattern predict_transition(const LocalRR& rr, Criterion c) {
    if (!rr.exists) return Pattern::MR;
    switch (c) {
        case Criterion::detachment: return Pattern::RR;
        case Criterion::sonic: return rr.weak_transonic ? Pattern::MR : Pattern::RR;
        case Criterion::angle_condition: return rr.angle_condition_ok ? Pattern::RR : Pattern::MR;
    }
    return Pattern::MR;
}

std::string_view to_string(Pattern p) { return p == Pattern::RR ? "RR" : "MR"; }

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::detachment: return "detachment";
        case Criterion::sonic: return "sonic";
        case Criterion::angle_condition: return "angle_condition";
    }
    return "?";
}

}  // namespace shockrefl
