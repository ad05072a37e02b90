#include "shockrefl/shock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockrefl/errors.hpp"
#include "shockrefl/roots.hpp"

namespace shockrefl {

namespace {

constexpr double kSonicTol = 1e-12;
constexpr double kBracketEps = 1e-9;
constexpr double kRootRtol = 1e-13;

}  // namespace

NormalShock normal_shock(double zn_u, double rho_u, double c_u, const GasConstants& k) {
    if (!(rho_u > 0.0) || !(c_u > 0.0)) throw DomainError("normal_shock: upstream rho and c must be positive");
    if (zn_u < c_u * (1.0 - kSonicTol)) {
        std::ostringstream os;
        os << "normal_shock: upstream normal speed " << zn_u << " is subsonic (c_u = " << c_u
           << "); only the trivial solution exists";
        throw NoShockError(os.str());
    }
    const NormalShock trivial{zn_u, rho_u, c_u};
    if (zn_u <= c_u * (1.0 + kSonicTol)) return trivial;

    const double gm1 = k.gamma - 1.0;
    const double expo = 2.0 / gm1;
    const double total = c_u * c_u + 0.5 * gm1 * zn_u * zn_u;
    const double target = zn_u;  // mass flux divided by rho_u
    // Residual of rho(z) z = rho_u zn_u, scaled by rho_u. Derivative uses d(rho)/dz = -rho z / c^2.
    auto residual = [&](double z) {
        const double c2 = total - 0.5 * gm1 * z * z;
        const double ratio = std::pow(c2 / (c_u * c_u), 0.5 * expo);
        return std::pair{ratio * z - target, ratio * (1.0 - z * z / c2)};
    };
    const double lo = kBracketEps * zn_u;
    const double hi = zn_u * (1.0 - kBracketEps);
    if (residual(hi).first <= 0.0) return trivial;

    const double z = roots::newton_bisect(residual, lo, hi, kRootRtol);
    const double c_d = std::sqrt(total - 0.5 * gm1 * z * z);
    const double rho_d = rho_u * std::pow(c_d / c_u, expo);
    return {z, rho_d, c_d};
}

namespace {

ShockSolution assemble(const FluidState& up, double beta, const NormalShock& ns, double zn_u, Vec2 n) {
    const Vec2 t = rot90(n);
    const double vt = dot(up.v, t);
    ShockSolution s;
    s.upstream = up;
    s.downstream = FluidState{ns.rho_d, ns.c_d, ns.zn_d * n + vt * t};
    s.n = n;
    s.t = t;
    s.beta = beta;
    s.strength = zn_u - ns.zn_d;
    return s;
}

}  // namespace

ShockSolution oblique_shock(const FluidState& upstream, double beta, const GasConstants& k) {
    const double speed = upstream.speed();
    if (speed == 0.0) throw InadmissibleAngleError("oblique_shock: upstream at rest");
    const Vec2 n = rotate(upstream.v / speed, beta);
    const double zn_u = dot(upstream.v, n);
    if (!(zn_u > upstream.c)) {
        std::ostringstream os;
        os << "oblique_shock: beta = " << beta << " rad leaves upstream normal component " << zn_u
           << " <= c_u = " << upstream.c;
        throw InadmissibleAngleError(os.str());
    }
    return assemble(upstream, beta, normal_shock(zn_u, upstream.rho, upstream.c, k), zn_u, n);
}

ShockSolution oblique_shock_or_trivial(const FluidState& upstream, double beta, const GasConstants& k) {
    const double speed = upstream.speed();
    const Vec2 n = rotate(upstream.v / speed, beta);
    const double zn_u = dot(upstream.v, n);
    if (zn_u <= upstream.c) return assemble(upstream, beta, NormalShock{zn_u, upstream.rho, upstream.c}, zn_u, n);
    return assemble(upstream, beta, normal_shock(zn_u, upstream.rho, upstream.c, k), zn_u, n);
}

Vec2 shock_normal_from_jump(Vec2 v_u, Vec2 v_d, double c_u) {
    const Vec2 jump = v_u - v_d;
    const double tol = 1e-9 * std::max(c_u, norm(v_u));
    const double mag = norm(jump);
    if (!(mag > tol)) throw DegenerateJumpError("shock_normal_from_jump: velocity jump below tolerance");
    return jump / mag;
}

double shock_speed(Vec2 xi_point, Vec2 n) { return dot(xi_point, n); }

double ShockResiduals::max_relative() const {
    return std::max({tangential, mass, bernoulli, alignment});
}

ShockResiduals shock_residuals(const ShockSolution& s, const GasConstants& k) {
    const auto& u = s.upstream;
    const auto& d = s.downstream;
    const double scale = std::max(u.speed(), u.c);
    ShockResiduals r;
    r.tangential = std::abs(dot(u.v, s.t) - dot(d.v, s.t)) / scale;
    const double vn_u = dot(u.v, s.n);
    const double vn_d = dot(d.v, s.n);
    r.mass = std::abs(u.rho * vn_u - d.rho * vn_d) / (u.rho * std::abs(vn_u));
    const double gm = 0.5 * (k.gamma - 1.0);
    const double bu = u.c * u.c + gm * dot(u.v, u.v);
    const double bd = d.c * d.c + gm * dot(d.v, d.v);
    r.bernoulli = std::abs(bu - bd) / bu;
    r.admissible = vn_u >= vn_d && vn_d >= 0.0;
    if (s.strength > 1e-8 * scale) r.alignment = norm(s.n - shock_normal_from_jump(u.v, d.v, u.c));
    return r;
}

}  // namespace shockrefl
