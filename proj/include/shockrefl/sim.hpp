#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shockrefl/errors.hpp"
#include "shockrefl/gas_state.hpp"
#include "shockrefl/reflection.hpp"

namespace shockrefl {

// Unsteady potential flow rho_t + div(rho v) = 0, v_t + grad(|v|^2/2 + pi(rho)) = 0, marched in
// physical time in the corner frame and read in similarity coordinates xi = x/t afterwards.
//
// Grid: parallelogram cells spanned by a = (-1, 0) (along the reflection wall) and b = (cos theta,
// sin theta) (along the opposite wall), both from the corner, so each wall is a grid line.
// Cell (i, j) has centre corner + (i + 1/2) hs a + (j + 1/2) hr b. Storage is j-major: j * nx + i.

struct SimConfig {
    ReflectionConfig reflection;
    int nx = 400;
    int ny = 400;
    double extent = 0.0;          ///< side length along each wall; 0 selects extent_factor * x_c * t_end
    double extent_factor = 1.6;
    double cfl = 0.8;
    double t0 = 0.05;
    double t_end = 1.0;
    bool second_order = true;     ///< false: piecewise-constant reconstruction and forward Euler
    int min_travel_cells = 200;   ///< cells the reflection point must cross between t0 and t_end
    int k_stem = 4;

    /// Throws DomainError on cfl outside (0, 1), non-positive sizes or times, or a grid that
    /// under-resolves the incident shock travel.
    void validate() const;
};

/// Exact two-state data: sector 1 ahead of the incident shock, sector 2 behind it (corner frame).
struct TwoState {
    FluidState s1;
    FluidState s2;
    Vec2 n{};          ///< downstream normal
    double sigma = 0.0;  ///< the shock is x . n = sigma t

    const FluidState& at(Vec2 x, double t) const { return dot(x, n) > sigma * t ? s2 : s1; }
};

struct SimGrid {
    int nx = 0;
    int ny = 0;
    double hs = 0.0;
    double hr = 0.0;
    Vec2 a{-1.0, 0.0};
    Vec2 b{};
    double sin_theta = 0.0;
    double area = 0.0;   ///< hs hr sin(theta)
    Vec2 n_s{};          ///< unit normal of constant-s faces, a . n_s > 0
    Vec2 n_r{};          ///< unit normal of constant-r faces, b . n_r > 0

    Vec2 point(double s, double r) const { return s * a + r * b; }
    Vec2 center(int i, int j) const { return point((i + 0.5) * hs, (j + 0.5) * hr); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

struct SimField {
    SimGrid grid;
    TwoState exact;
    GasConstants k;
    double t = 0.0;
    std::vector<double> rho;
    std::vector<double> vx;
    std::vector<double> vy;
};

/// Density positivity lost during a step. Carries the last good field.
class StepFailure : public NumericalError {
public:
    StepFailure(const std::string& what, std::shared_ptr<const SimField> last_good)
        : NumericalError(what), last_good_(std::move(last_good)) {}
    const SimField& last_good() const { return *last_good_; }

private:
    std::shared_ptr<const SimField> last_good_;
};

SimGrid make_grid(const SimConfig& cfg);
TwoState exact_two_state(const ReflectionConfig& cfg);

/// Piecewise-constant two-state field at t0. Throws GeometryError when the incident shock does
/// not cross the grid.
SimField setup_initial(const SimConfig& cfg);

struct StepStats {
    double dt = 0.0;
    double boundary_mass_out = 0.0;  ///< mass leaving through the far boundaries during the step
};

/// Scratch buffers reused between steps.
struct StepWorkspace;
struct StepWorkspaceDeleter {
    void operator()(StepWorkspace* w) const;
};
using WorkspacePtr = std::unique_ptr<StepWorkspace, StepWorkspaceDeleter>;
WorkspacePtr make_workspace();

double stable_dt(const SimField& f, double cfl);

/// One time step of size min(stable dt, t_limit - t). OpenMP over faces and cells.
StepStats step(SimField& f, double cfl, bool second_order, double t_limit, StepWorkspace* ws = nullptr);
/// Same update with every face flux computed on the fly inside a plain serial cell loop.
StepStats step_reference(SimField& f, double cfl, bool second_order, double t_limit);

double total_mass(const SimField& f);

/// Normalised density-gradient magnitude |grad rho| h / rho, scaled to max 1.
std::vector<double> shock_indicator(const SimField& f);

enum class PatternClass { RR, MR, undetermined };
std::string_view to_string(PatternClass c);

struct PatternResult {
    PatternClass classification = PatternClass::undetermined;
    Vec2 point{};              ///< reflection or triple point, similarity coordinates
    double stem_length = 0.0;  ///< similarity units, 0 for RR
    double stem_cells = 0.0;   ///< junction height in grid rows
    double junction_rows = 0.0;  ///< raw fitted junction height, rows (kept for RR too)
    std::string note;
};

/// Traces the outermost (incident/stem) front and the next front inward row by row from the
/// reflection wall, extrapolates their separation to zero and calls MR when the junction sits
/// more than k_stem rows above the wall with a front below it down to the wall.
/// Throws PreconditionError before the reflection point has crossed 100 cells.
PatternResult classify_pattern(const SimField& f, int k_stem = 4);

/// Position (in s) where the incident shock crosses grid row j, from the integrated sector fraction
/// over a window of +-w cells around the exact crossing.
double front_position(const SimField& f, int j, int w = 16);
/// Row whose incident-shock crossing lies farthest from the reflection point, the opposite-wall
/// meeting point and the sector-2 sonic circle, with the +-w window inside the grid.
std::optional<int> front_row(const SimField& f, int w = 16);

/// rho (v.n - sigma) on each side of the captured incident front on row j, averaged over 12 cells
/// starting m cells away.
struct FrontFluxes {
    double upstream = 0.0;
    double downstream = 0.0;
};
FrontFluxes front_mass_fluxes(const SimField& f, int j, int m = 8);

struct RunOptions {
    std::vector<double> dump_times;
    std::function<void(const SimField&)> on_dump;
    std::filesystem::path failure_dump;  ///< field CSV written on StepFailure when non-empty
    bool parallel = true;
};

struct RunOutput {
    SimField field;
    PatternResult pattern;
    int steps = 0;
    double seconds = 0.0;
    double sigma = 0.0;
    double front_speed = 0.0;        ///< sigma measured over the last 10 steps, 0 if unmeasurable
    double front_speed_early = 0.0;  ///< over the first 10 steps with a measurable row
    double front_time = 0.0;         ///< start of the early measurement
    double max_mass_defect = 0.0;   ///< max relative per-step conservation defect
    FrontFluxes front_fluxes;        ///< at t_end
};

RunOutput run(const SimConfig& cfg, const RunOptions& opt = {});

std::string field_csv(const SimField& f);
std::string pattern_json(const PatternResult& p, int indent = 2);

}  // namespace shockrefl
