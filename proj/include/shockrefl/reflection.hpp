#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "shockrefl/gas_state.hpp"
#include "shockrefl/polar.hpp"
#include "shockrefl/shock.hpp"

namespace shockrefl {

// Geometry conventions.
//
// Corner frame: corner at the origin, reflection wall along the ray (-1, 0), opposite wall along
// (cos theta, sin theta), fluid in between (y > 0). The corner angle is 180 deg - theta.
// The incident shock line has direction angle theta + alpha and meets the reflection wall at
// xi_R. Sector 1 flows along the reflection wall, sector 2 along the opposite wall.
//
// Reflection-point frame: the corner frame translated so that xi_R is the origin. Velocities
// there equal pseudo-velocities at xi_R, so the local problem is steady. M1 is the sector-1 Mach
// number in this frame.

struct ReflectionConfig {
    double M1 = 3.0;
    double alpha = 0.0;  ///< rad
    double theta = 0.0;  ///< rad
    GasConstants k{};
    double rho1 = 1.0;
    double c1 = 1.0;

    /// Throws DomainError on M1 <= 1, theta outside (0, pi) or invalid gas constants.
    void validate() const;
};

struct Geometry {
    Vec2 corner{};
    Vec2 reflection_wall{-1.0, 0.0};  ///< unit ray from the corner
    Vec2 opposite_wall{};             ///< unit ray from the corner
    Vec2 xi_R{};
    double corner_distance = 0.0;     ///< |xi_R - corner|
    Vec2 incident_dir{};              ///< along the incident shock, into the fluid
    Vec2 incident_normal{};           ///< downstream normal of the incident shock
    double incident_speed = 0.0;      ///< sigma = xi . n on the incident line
    /// Velocity of this frame relative to the reflection-point frame: v_here = v_R - frame_velocity.
    Vec2 frame_velocity{};
    bool incident_meets_opposite = false;
    Vec2 xi_P{};                      ///< incident shock / opposite wall intersection when it exists

    Vec2 to_frame(Vec2 v_reflection_point) const { return v_reflection_point - frame_velocity; }
    FluidState to_frame(const FluidState& s) const { return {s.rho, s.c, to_frame(s.v)}; }
};

/// Geometry in the corner frame, optionally observed from a frame moving with `shift` relative to
/// the corner (positions xi - shift, velocities v - shift). Also returns the incident shock.
/// Throws GeometryError when the incident shock does not reach the reflection wall from the
/// fluid side or the corner falls behind the reflection point.
struct IncidentSetup {
    Geometry geometry;
    ShockSolution incident;  ///< reflection-point frame
};
IncidentSetup canonical_geometry(const ReflectionConfig& cfg, Vec2 shift = {});

struct LocalRR {
    ReflectionConfig cfg;
    Geometry geometry;  ///< corner frame
    FluidState sector1;  ///< reflection-point frame
    FluidState sector2;
    ShockSolution incident;
    std::optional<ShockSolution> weak;    ///< reflected, reflection-point frame
    std::optional<ShockSolution> strong;
    std::optional<FluidState> sector3_weak;
    std::optional<FluidState> sector3_strong;
    double tau_required = 0.0;  ///< turn imposed by slip along the reflection wall
    double tau_star = 0.0;      ///< of the reflected polar
    double tau_sonic = 0.0;
    double phi_weak = 0.0;      ///< direction angles of the reflected-shock tangents at xi_R
    double phi_strong = 0.0;
    /// Angle between strong reflected shock and opposite wall on the shock's downstream side.
    double angle_strong = 0.0;
    double angle_weak = 0.0;
    bool exists = false;
    bool critical = false;
    bool weak_transonic = false;
    bool angle_condition_ok = false;
};

/// Local regular reflection at xi_R. Non-existence (tau_required > tau*) is reported through
/// `exists`. Throws NoReflectedPolarError when sector 2 is not supersonic at xi_R.
LocalRR local_rr(const ReflectionConfig& cfg, int polar_samples = 256);

/// True iff the strong reflected shock meets the opposite wall at a downstream-side angle of at
/// most 90 deg. Throws PreconditionError when no local RR exists.
bool angle_condition(const LocalRR& rr);

enum class Branch { weak, strong };

/// theta - 90 deg - phi_branch: zero when that reflected shock is perpendicular to the opposite wall.
double perpendicularity_residual(const LocalRR& rr, Branch b);

/// Lowest theta with a local RR for fixed M1 and alpha (tau_required = tau*), bisected to 1e-13.
/// Throws NotFoundError when no local RR exists in the admissible window.
double detachment_theta(double M1, double alpha, const GasConstants& k);

/// Theta at which the branch's reflected shock is perpendicular to the opposite wall (trivial RR),
/// for fixed M1 and alpha. Throws NotFoundError without a sign change in the scanned interval.
double trivial_theta(double M1, double alpha, const GasConstants& k, Branch b);
inline double trivial_strong_theta(double M1, double alpha, const GasConstants& k) {
    return trivial_theta(M1, alpha, k, Branch::strong);
}
inline double trivial_weak_theta(double M1, double alpha, const GasConstants& k) {
    return trivial_theta(M1, alpha, k, Branch::weak);
}

/// Straight shock perpendicular to the opposite wall with sector-2 upstream data.
/// Wall coordinates: e_x along the opposite wall towards the corner, e_y into the fluid.
struct VerticalShock {
    double xi_x = 0.0;
    double zn_u = 0.0;
    double zn_d = 0.0;
    Vec2 v_d{};       ///< corner frame
    Vec2 v_d_wall{};  ///< (v_d . e_x, v_d . e_y)
};

/// Abscissa of xi_R in wall coordinates.
double reflection_point_abscissa(const LocalRR& rr);

/// Throws PreconditionError without local RR and InadmissibleAngleError when the upstream normal
/// pseudo-velocity at xi_x is not supersonic.
VerticalShock vertical_shock_downstream(const LocalRR& rr, double xi_x);

enum class Criterion { detachment, sonic, angle_condition };
enum class Pattern { RR, MR };

Pattern predict_transition(const LocalRR& rr, Criterion c);

std::string_view to_string(Pattern p);
std::string_view to_string(Criterion c);

/// JSON report: configuration, sector states, shocks, flags and all three predictions.
/// Angles in degrees, states in the reflection-point frame.
std::string local_rr_json(const LocalRR& rr, int indent = 2);

}  // namespace shockrefl
