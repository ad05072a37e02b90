#include "shockrefl/transition_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "shockrefl/errors.hpp"
#include "shockrefl/io.hpp"
#include "shockrefl/roots.hpp"

namespace shockrefl {

namespace {

constexpr double kCurveTol = 1e-12;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

TransitionMap empty_map(const SweepOptions& opt) {
    opt.validate();
    TransitionMap m;
    m.gamma = opt.gamma;
    m.alpha = opt.alpha;
    m.m1_grid = linspace(opt.m1_min, opt.m1_max, opt.n_m1);
    m.theta_grid = linspace(opt.theta_min, opt.theta_max, opt.n_theta);
    m.cells.resize(m.m1_grid.size() * m.theta_grid.size());
    return m;
}

GasConstants gas(double gamma) {
    GasConstants k;
    k.gamma = gamma;
    return k;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void SweepOptions::validate() const {
    gas(gamma).validate();
    if (!(m1_min > 1.0)) throw DomainError("map: m1_min must exceed 1");
    if (!(m1_max >= m1_min)) throw DomainError("map: m1_max must not be below m1_min");
    if (!(theta_min > 0.0 && theta_max < pi && theta_max >= theta_min))
        throw DomainError("map: theta range must be ordered inside (0, 180) deg");
    if (n_m1 < 2 || n_theta < 2) throw DomainError("map: resolution must be at least 2 on each axis");
    if (polar_samples < 8) throw DomainError("map: polar_samples must be at least 8");
    if (!std::isfinite(alpha)) throw DomainError("map: alpha must be finite");
}

const Curve& TransitionMap::curve(std::string_view name) const {
    for (const auto& c : curves)
        if (c.name == name) return c;
    throw NotFoundError("no curve named " + std::string(name));
}

MapCell evaluate_cell(double m1, double theta, double alpha, const GasConstants& k, int polar_samples) {
    MapCell c;
    c.m1 = m1;
    c.theta = theta;
    ReflectionConfig cfg;
    cfg.M1 = m1;
    cfg.alpha = alpha;
    cfg.theta = theta;
    cfg.k = k;
    try {
        const LocalRR rr = local_rr(cfg, polar_samples);
        c.exists = rr.exists;
        if (rr.exists) {
            c.weak_transonic = rr.weak_transonic;
            c.weak_supersonic = !rr.weak_transonic;
            c.angle_ok = rr.angle_condition_ok;
            c.res_sonic = rr.sector3_weak->mach() - 1.0;
            c.res_weak = perpendicularity_residual(rr, Branch::weak);
            c.res_strong = perpendicularity_residual(rr, Branch::strong);
        }
        c.pred_detach = predict_transition(rr, Criterion::detachment);
        c.pred_sonic = predict_transition(rr, Criterion::sonic);
        c.pred_new = predict_transition(rr, Criterion::angle_condition);
    } catch (const NoReflectedPolarError&) {
        // sector 2 subsonic: a valid configuration without local RR
    } catch (const Error&) {
        c.defined = false;
    }
    return c;
}

TransitionMap sweep(const SweepOptions& opt) {
    TransitionMap m = empty_map(opt);
    const GasConstants k = gas(opt.gamma);
    const long n_theta = static_cast<long>(m.theta_grid.size());
    const long n = static_cast<long>(m.cells.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < n; ++idx) {
        m.cells[static_cast<std::size_t>(idx)] =
            evaluate_cell(m.m1_grid[static_cast<std::size_t>(idx / n_theta)],
                          m.theta_grid[static_cast<std::size_t>(idx % n_theta)], opt.alpha, k, opt.polar_samples);
    }
    if (opt.extract_curves) m.curves = extract_curves(m, opt.polar_samples);
    return m;
}

TransitionMap sweep_reference(const SweepOptions& opt) {
    TransitionMap m = empty_map(opt);
    const GasConstants k = gas(opt.gamma);
    for (std::size_t i = 0; i < m.m1_grid.size(); ++i)
        for (std::size_t j = 0; j < m.theta_grid.size(); ++j)
            m.cells[i * m.theta_grid.size() + j] =
                evaluate_cell(m.m1_grid[i], m.theta_grid[j], opt.alpha, k, opt.polar_samples);
    if (opt.extract_curves) m.curves = extract_curves(m, opt.polar_samples);
    return m;
}

std::vector<Curve> extract_curves(const TransitionMap& map, int polar_samples) {
    const GasConstants k = gas(map.gamma);
    auto probe = [&](double m1, double th) { return evaluate_cell(m1, th, map.alpha, k, polar_samples); };

    std::vector<Curve> curves;
    for (auto name : kCurveNames) curves.push_back({std::string(name), {}});
    auto& detach = curves[0].points;
    auto& sonic = curves[1].points;
    auto& weak = curves[2].points;
    auto& strong = curves[3].points;
    auto& angle = curves[4].points;

    const std::size_t nt = map.theta_grid.size();
    for (std::size_t i = 0; i < map.m1_grid.size(); ++i) {
        const double m1 = map.m1_grid[i];
        auto bisect_flag = [&](double a, double b, auto flag) {
            const bool fa = flag(probe(m1, a));
            while (b - a > kCurveTol) {
                const double mid = 0.5 * (a + b);
                (flag(probe(m1, mid)) == fa ? a : b) = mid;
            }
            return 0.5 * (a + b);
        };
        auto root = [&](double a, double b, double ra, double rb, double MapCell::*res, std::vector<CurvePoint>& out) {
            if (ra == 0.0 || (ra > 0.0) == (rb > 0.0)) return;
            const double th = roots::brent(
                [&](double x) {
                    const MapCell c = probe(m1, x);
                    if (!c.exists) throw NumericalError("curve extraction: local RR vanished inside a bracket");
                    return c.*res;
                },
                a, b, kCurveTol);
            out.push_back({m1, th});
        };

        for (std::size_t j = 0; j + 1 < nt; ++j) {
            const MapCell& ca = map.at(i, j);
            const MapCell& cb = map.at(i, j + 1);
            if (!ca.defined || !cb.defined) continue;
            double a = ca.theta;
            const double b = cb.theta;
            MapCell lo = ca;
            if (!ca.exists && cb.exists) {
                // bisection keeps the existing side, so lo is a genuine local RR at the detach point
                const double th_d = bisect_flag(a, b, [](const MapCell& c) { return c.exists; });
                detach.push_back({m1, th_d});
                a = th_d + 0.5 * kCurveTol;
                lo = probe(m1, a);
                if (!lo.exists) continue;
            } else if (ca.exists && !cb.exists) {
                // RR disappearing with increasing theta is also a detachment
                detach.push_back({m1, bisect_flag(a, b, [](const MapCell& c) { return c.exists; })});
                continue;
            }
            if (ca.pred_new != cb.pred_new)
                angle.push_back({m1, bisect_flag(ca.theta, b, [](const MapCell& c) { return c.pred_new == Pattern::RR; })});
            if (!lo.exists || !cb.exists) continue;
            root(a, b, lo.res_sonic, cb.res_sonic, &MapCell::res_sonic, sonic);
            root(a, b, lo.res_weak, cb.res_weak, &MapCell::res_weak, weak);
            root(a, b, lo.res_strong, cb.res_strong, &MapCell::res_strong, strong);
        }
    }
    for (auto& c : curves)
        std::sort(c.points.begin(), c.points.end(), [](const CurvePoint& p, const CurvePoint& q) {
            return p.m1 != q.m1 ? p.m1 < q.m1 : p.theta < q.theta;
        });
    return curves;
}

std::string cells_csv(const TransitionMap& map) {
    std::ostringstream os;
    os << "m1,theta_deg,exists,weak_supersonic,weak_transonic,angle_ok,pred_detach,pred_sonic,pred_new\n";
    for (const auto& c : map.cells) {
        os << fmt(c.m1) << ',' << fmt(deg(c.theta)) << ',';
        if (!c.defined) {
            os << "-1,-1,-1,-1,undefined,undefined,undefined\n";
            continue;
        }
        os << c.exists << ',' << c.weak_supersonic << ',' << c.weak_transonic << ',' << c.angle_ok << ','
           << to_string(c.pred_detach) << ',' << to_string(c.pred_sonic) << ',' << to_string(c.pred_new) << '\n';
    }
    return os.str();
}

std::string curves_csv(const TransitionMap& map) {
    std::ostringstream os;
    os << "curve_name,m1,theta_deg\n";
    for (const auto& c : map.curves)
        for (const auto& p : c.points) os << c.name << ',' << fmt(p.m1) << ',' << fmt(deg(p.theta)) << '\n';
    return os.str();
}

void export_csv(const TransitionMap& map, const std::filesystem::path& cells_path,
                const std::filesystem::path& curves_path) {
    write_file_atomic(cells_path, cells_csv(map));
    write_file_atomic(curves_path, curves_csv(map));
}

std::vector<MapCell> parse_cells_csv(std::string_view text) {
    std::vector<MapCell> out;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("m1,theta_deg,", 0) != 0) throw DomainError("cells csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
        if (f.size() != 9) throw DomainError("cells csv: expected 9 fields in '" + line + "'");
        MapCell c;
        c.m1 = std::stod(f[0]);
        c.theta = rad(std::stod(f[1]));
        auto pattern = [](const std::string& s) { return s == "RR" ? Pattern::RR : Pattern::MR; };
        if (f[2] == "-1") {
            c.defined = false;
        } else {
            c.exists = f[2] == "1";
            c.weak_supersonic = f[3] == "1";
            c.weak_transonic = f[4] == "1";
            c.angle_ok = f[5] == "1";
            c.pred_detach = pattern(f[6]);
            c.pred_sonic = pattern(f[7]);
            c.pred_new = pattern(f[8]);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace shockrefl
