#include "shockrefl/gas_state.hpp"

#include <cmath>
#include <string>

#include "shockrefl/errors.hpp"

namespace shockrefl {

void GasConstants::validate() const {
    if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1, got " + std::to_string(gamma));
    if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
    if (!(c0 > 0.0)) throw DomainError("c0 must be positive");
}

double pressure(double rho, const GasConstants& k) {
    if (!(rho > 0.0)) throw DomainError("pressure: density must be positive");
    return k.rho0 * k.c0 * k.c0 / k.gamma * std::pow(rho / k.rho0, k.gamma);
}

double pi_of_rho(double rho, const GasConstants& k) {
    if (!(rho > 0.0)) throw DomainError("pi_of_rho: density must be positive");
    return k.c0 * k.c0 / (k.gamma - 1.0) * std::pow(rho / k.rho0, k.gamma - 1.0);
}

double rho_from_pi(double q, const GasConstants& k) {
    if (!(q > 0.0)) throw CavitationError("cavitation: enthalpy argument " + std::to_string(q) + " <= 0");
    return k.rho0 * std::pow(q * (k.gamma - 1.0) / (k.c0 * k.c0), 1.0 / (k.gamma - 1.0));
}

double sound_speed(double rho, const GasConstants& k) {
    if (!(rho > 0.0)) throw DomainError("sound_speed: density must be positive");
    return k.c0 * std::pow(rho / k.rho0, 0.5 * (k.gamma - 1.0));
}

double density_from_sound_speed(double c, const GasConstants& k) {
    if (!(c > 0.0)) throw CavitationError("density_from_sound_speed: non-positive sound speed");
    return k.rho0 * std::pow(c / k.c0, 2.0 / (k.gamma - 1.0));
}

double rho_from_chi(double chi, Vec2 grad_chi, const GasConstants& k) {
    return rho_from_pi(-chi - 0.5 * dot(grad_chi, grad_chi), k);
}

double sound_speed_from_chi(double chi, Vec2 grad_chi, const GasConstants& k) {
    // Same relation as c^2 = c0^2 + (1-gamma)(chi + |grad chi|^2/2) with chi shifted by the constant
    // c0^2/(gamma-1), which is what the pi normalisation above amounts to.
    const double c2 = (1.0 - k.gamma) * (chi + 0.5 * dot(grad_chi, grad_chi));
    if (!(c2 > 0.0)) throw CavitationError("cavitation: c^2 = " + std::to_string(c2) + " <= 0");
    return std::sqrt(c2);
}

double pseudo_mach(Vec2 v, Vec2 xi, double c) {
    if (!(c > 0.0)) throw DomainError("pseudo_mach: sound speed must be positive");
    return norm(v - xi) / c;
}

PseudoState make_pseudo_state(Vec2 v, Vec2 xi, double c) {
    const Vec2 z = v - xi;
    return {xi, z, pseudo_mach(v, xi, c)};
}

FluidState make_state(double rho, Vec2 v, const GasConstants& k) {
    return {rho, sound_speed(rho, k), v};
}

FluidState make_state_from_c(double c, Vec2 v, const GasConstants& k) {
    return {density_from_sound_speed(c, k), c, v};
}

}  // namespace shockrefl
