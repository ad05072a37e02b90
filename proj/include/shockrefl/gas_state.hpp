#pragma once

#include "shockrefl/vec2.hpp"

namespace shockrefl {

/// Polytropic gas: p = (rho0 c0^2 / gamma) (rho/rho0)^gamma.
struct GasConstants {
    double gamma = 1.4;
    double rho0 = 1.0;
    double c0 = 1.0;

    /// Throws DomainError unless gamma > 1, rho0 > 0, c0 > 0.
    void validate() const;
};

/// Constant state of a sector: density, sound speed and velocity.
struct FluidState {
    double rho = 1.0;
    double c = 1.0;
    Vec2 v{};

    double speed() const { return norm(v); }
    double mach() const { return norm(v) / c; }
};

/// Similarity-plane quantities at a point: xi, pseudo-velocity z = v - xi and pseudo-Mach L.
struct PseudoState {
    Vec2 xi{};
    Vec2 z{};
    double L = 0.0;
};

double pressure(double rho, const GasConstants& k);

/// Enthalpy-like potential with d(pi)/d(rho) = c^2/rho, normalised so pi = c^2/(gamma-1).
double pi_of_rho(double rho, const GasConstants& k);

/// Closed-form inverse of pi_of_rho. Throws CavitationError for q <= 0.
double rho_from_pi(double q, const GasConstants& k);

double sound_speed(double rho, const GasConstants& k);
double density_from_sound_speed(double c, const GasConstants& k);

/// Density from the pseudo-potential and its gradient: rho = pi^{-1}(-chi - |grad chi|^2/2).
double rho_from_chi(double chi, Vec2 grad_chi, const GasConstants& k);

/// c^2 = (gamma-1)(-chi - |grad chi|^2/2), consistent with rho_from_chi under the pi
/// normalisation above. Throws CavitationError when c^2 <= 0.
double sound_speed_from_chi(double chi, Vec2 grad_chi, const GasConstants& k);

/// L = |v - xi| / c. L < 1 exactly where the self-similar equation is elliptic.
double pseudo_mach(Vec2 v, Vec2 xi, double c);

PseudoState make_pseudo_state(Vec2 v, Vec2 xi, double c);

/// State with sound speed taken from the polytropic law.
FluidState make_state(double rho, Vec2 v, const GasConstants& k);

/// State with density taken from the polytropic law.
FluidState make_state_from_c(double c, Vec2 v, const GasConstants& k);

}  // namespace shockrefl
