#include "json.hpp"
#include "shockrefl/reflection.hpp"

namespace shockrefl {

namespace {

using nlohmann::ordered_json;

ordered_json state_json(const FluidState& s) {
    return {{"rho", s.rho}, {"c", s.c}, {"vx", s.v.x}, {"vy", s.v.y}, {"mach", s.mach()}};
}

ordered_json shock_json(const ShockSolution& s) {
    return {{"beta_deg", deg(s.beta)},
            {"normal", {s.n.x, s.n.y}},
            {"strength", s.strength},
            {"downstream", state_json(s.downstream)}};
}

}  // namespace

std::string local_rr_json(const LocalRR& rr, int indent) {
    ordered_json j;
    j["config"] = {{"gamma", rr.cfg.k.gamma},
                   {"mach", rr.cfg.M1},
                   {"alpha_deg", deg(rr.cfg.alpha)},
                   {"theta_deg", deg(rr.cfg.theta)},
                   {"rho1", rr.cfg.rho1},
                   {"c1", rr.cfg.c1}};
    const Geometry& g = rr.geometry;
    j["geometry"] = {{"xi_R", {g.xi_R.x, g.xi_R.y}},
                     {"corner_distance", g.corner_distance},
                     {"incident_speed", g.incident_speed},
                     {"incident_meets_opposite", g.incident_meets_opposite}};
    if (g.incident_meets_opposite) j["geometry"]["xi_P"] = {g.xi_P.x, g.xi_P.y};
    j["sector1"] = state_json(rr.sector1);
    j["sector2"] = state_json(rr.sector2);
    j["incident"] = shock_json(rr.incident);
    j["tau_required_deg"] = deg(rr.tau_required);
    j["tau_star_deg"] = deg(rr.tau_star);
    j["tau_sonic_deg"] = deg(rr.tau_sonic);
    j["exists"] = rr.exists;
    j["critical"] = rr.critical;
    if (rr.exists) {
        j["weak"] = shock_json(*rr.weak);
        j["strong"] = shock_json(*rr.strong);
        j["sector3_weak"] = state_json(*rr.sector3_weak);
        j["sector3_strong"] = state_json(*rr.sector3_strong);
        j["phi_weak_deg"] = deg(rr.phi_weak);
        j["phi_strong_deg"] = deg(rr.phi_strong);
        j["angle_weak_deg"] = deg(rr.angle_weak);
        j["angle_strong_deg"] = deg(rr.angle_strong);
        j["weak_transonic"] = rr.weak_transonic;
        j["angle_ok"] = rr.angle_condition_ok;
    }
    j["predictions"] = {{"detachment", to_string(predict_transition(rr, Criterion::detachment))},
                        {"sonic", to_string(predict_transition(rr, Criterion::sonic))},
                        {"new", to_string(predict_transition(rr, Criterion::angle_condition))}};
    return j.dump(indent);
}

}  // namespace shockrefl
