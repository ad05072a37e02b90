#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "shockrefl/gas_state.hpp"
#include "shockrefl/reflection.hpp"

namespace shockrefl {

struct SweepOptions {
    double gamma = 1.4;
    double alpha = 0.0;  ///< rad
    double m1_min = 1.2;
    double m1_max = 6.0;
    double theta_min = rad(110.0);
    double theta_max = rad(175.0);
    int n_m1 = 128;
    int n_theta = 128;
    int polar_samples = 128;
    bool extract_curves = true;

    /// Throws DomainError on m1_min <= 1, inverted ranges, fewer than 2 points on an axis or
    /// non-positive polar_samples.
    void validate() const;
};

struct MapCell {
    double m1 = 0.0;
    double theta = 0.0;
    bool defined = true;  ///< false when the configuration itself is invalid (no incident shock)
    bool exists = false;
    bool weak_supersonic = false;
    bool weak_transonic = false;
    bool angle_ok = false;
    Pattern pred_detach = Pattern::MR;
    Pattern pred_sonic = Pattern::MR;
    Pattern pred_new = Pattern::MR;
    // Residuals behind the curves, zero without local RR.
    double res_sonic = 0.0;   ///< M3_weak - 1
    double res_weak = 0.0;    ///< weak perpendicularity residual
    double res_strong = 0.0;  ///< strong perpendicularity residual

    bool operator==(const MapCell&) const = default;
};

struct CurvePoint {
    double m1;
    double theta;
};

struct Curve {
    std::string name;
    std::vector<CurvePoint> points;  ///< ordered by arclength (increasing m1)
};

inline constexpr std::string_view kCurveNames[] = {"detach", "sonic", "weak trivial", "strong trivial",
                                                   "angle-condition boundary"};

struct TransitionMap {
    double gamma = 1.4;
    double alpha = 0.0;
    std::vector<double> m1_grid;
    std::vector<double> theta_grid;
    std::vector<MapCell> cells;  ///< row-major: index = i_m1 * n_theta + j_theta
    std::vector<Curve> curves;   ///< in kCurveNames order

    const MapCell& at(std::size_t i_m1, std::size_t j_theta) const { return cells[i_m1 * theta_grid.size() + j_theta]; }
    const Curve& curve(std::string_view name) const;
};

/// Evaluates one (M1, theta) configuration. Never throws for domain problems.
MapCell evaluate_cell(double m1, double theta, double alpha, const GasConstants& k, int polar_samples = 128);

/// Parallel sweep (OpenMP over cells) followed by single-threaded curve extraction.
TransitionMap sweep(const SweepOptions& opt);
/// Same cells computed in a plain serial loop; kept as the reference for the parallel kernel.
TransitionMap sweep_reference(const SweepOptions& opt);

/// Extracts the named curves from an evaluated map by edge bisection on label changes along theta,
/// refined on the defining residuals.
std::vector<Curve> extract_curves(const TransitionMap& map, int polar_samples = 128);

std::string cells_csv(const TransitionMap& map);
std::string curves_csv(const TransitionMap& map);
/// Writes both CSVs atomically. Throws IoError on unwritable destinations.
void export_csv(const TransitionMap& map, const std::filesystem::path& cells_path,
                const std::filesystem::path& curves_path);

/// Parses a cells CSV back into cells (labels only; residuals are not stored).
std::vector<MapCell> parse_cells_csv(std::string_view text);

}  // namespace shockrefl
