#pragma once

#include "shockrefl/gas_state.hpp"
#include "shockrefl/vec2.hpp"

namespace shockrefl {

/// Steady potential-flow shock. n is the downstream unit normal, t = rot90(n).
/// beta is the counterclockwise angle from the upstream velocity to n; strength = v^n_u - v^n_d.
struct ShockSolution {
    FluidState upstream;
    FluidState downstream;
    Vec2 n{1.0, 0.0};
    Vec2 t{0.0, 1.0};
    double beta = 0.0;
    double strength = 0.0;
};

struct NormalShock {
    double zn_d;
    double rho_d;
    double c_d;
};

/// Downstream normal speed, density and sound speed behind a steady normal shock with upstream
/// normal speed zn_u > c_u. Mass flux rho z and c^2 + (gamma-1)/2 z^2 are continuous.
/// zn_u equal to c_u (to 1e-12 relative) returns the zero-strength solution.
NormalShock normal_shock(double zn_u, double rho_u, double c_u, const GasConstants& k);

/// Oblique shock whose downstream normal is the upstream velocity direction rotated by beta.
/// Throws InadmissibleAngleError unless the upstream normal component is supersonic.
ShockSolution oblique_shock(const FluidState& upstream, double beta, const GasConstants& k);

/// As oblique_shock, but an upstream normal component at or below c_u yields the zero-strength
/// shock instead of an error. Used at the ends of a polar.
ShockSolution oblique_shock_or_trivial(const FluidState& upstream, double beta, const GasConstants& k);

/// n = (v_u - v_d)/|v_u - v_d|. Throws DegenerateJumpError when the jump is below
/// 1e-9 * max(c_u, |v_u|).
Vec2 shock_normal_from_jump(Vec2 v_u, Vec2 v_d, double c_u = 0.0);

/// sigma = xi . n, the speed of a self-similar shock through xi with normal n.
double shock_speed(Vec2 xi_point, Vec2 n);

/// Residuals of the shock invariants, all relative to the upstream scale.
struct ShockResiduals {
    double tangential = 0.0;  ///< |v_u.t - v_d.t| / max(|v_u|, c_u)
    double mass = 0.0;        ///< |rho_u v^n_u - rho_d v^n_d| / (rho_u |v^n_u|)
    double bernoulli = 0.0;   ///< relative mismatch of c^2 + (gamma-1)/2 |v|^2
    double alignment = 0.0;   ///< |n - jump direction|, zero for strength 0
    bool admissible = true;   ///< v^n_u >= v^n_d >= 0
    double max_relative() const;
};

ShockResiduals shock_residuals(const ShockSolution& s, const GasConstants& k);

}  // namespace shockrefl
