#pragma once

#include <iosfwd>
#include <vector>

#include "shockrefl/gas_state.hpp"
#include "shockrefl/shock.hpp"

namespace shockrefl {

struct PolarSample {
    double beta;
    Vec2 v_d;
    double rho_d;
    double c_d;
    double mach_d;
    double tau;  ///< counterclockwise turn from v_u to v_d
};

/// Shock polar of a uniform supersonic upstream state.
///
/// Samples and angles live in the canonical frame where v_u = (M_u c_u, 0). Shocks returned by
/// solve_for_turn are expressed in the frame of the upstream state the polar was built from
/// (`source`), which only differs by a rotation.
///
/// Positive tau is reached for negative beta. On that side the strong branch is
/// beta in [beta_star, 0] and the weak branch beta in (-beta_max, beta_star].
struct ShockPolar {
    FluidState upstream;  ///< canonical
    FluidState source;    ///< as supplied
    GasConstants k;
    double mach = 0.0;
    double beta_max = 0.0;
    std::vector<PolarSample> samples;  ///< ascending beta, mirror symmetric
    double tau_star = 0.0;
    double beta_star = 0.0;  ///< < 0
    double tau_sonic = 0.0;
    double beta_sonic = 0.0;  ///< < 0, on the weak branch
    /// Found by probing the weak branch at tau_sonic/2: true when the weak branch is supersonic
    /// for |tau| < tau_sonic.
    bool weak_supersonic_below_sonic = true;

    double tau_of_beta(double beta) const;
    /// Shock at angle beta, in the source frame. |beta| >= beta_max gives the zero-strength shock.
    ShockSolution at(double beta) const;
    bool weak_is_supersonic(double tau) const;
};

/// Builds the polar with a Chebyshev-clustered beta grid and populates tau_star and tau_sonic.
/// Throws SubsonicUpstreamError for M_u <= 1 and DomainError for n_samples < 64.
ShockPolar build_polar(const FluidState& upstream, const GasConstants& k, int n_samples = 512);

/// max over beta of tau(beta), by golden section bracketed by the sample maximum.
/// Also writes the maximiser to *beta_star when non-null.
double critical_angle(const ShockPolar& polar, double* beta_star = nullptr);

/// Turn angle at which the weak branch is exactly sonic.
double sonic_angle(const ShockPolar& polar, double* beta_sonic = nullptr);

struct TurnSolution {
    ShockSolution weak;
    ShockSolution strong;
    bool critical = false;  ///< |tau| within 1e-9 of tau_star: weak and strong coincide
};

/// Both shocks turning the upstream velocity by tau (counterclockwise).
/// Throws DetachmentError for |tau| > tau_star.
TurnSolution solve_for_turn(const ShockPolar& polar, double tau);

struct ConvexityReport {
    bool strictly_convex = false;    ///< consecutive chord cross products share one sign
    bool derivative_nonzero = false; ///< no two consecutive samples coincide
    double min_cross = 0.0;
    double max_cross = 0.0;
};

ConvexityReport check_convexity(const ShockPolar& polar);

/// CSV with header beta_rad,vdx,vdy,rho_d,c_d,M_d,tau_rad.
void write_polar_csv(const ShockPolar& polar, std::ostream& out);

}  // namespace shockrefl
