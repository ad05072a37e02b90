#include <algorithm>
#include <cmath>
#include <optional>

#include "json.hpp"
#include "shockrefl/sim.hpp"

namespace shockrefl {

namespace {

constexpr double kPeakThreshold = 0.1;
constexpr double kDipRatio = 0.6;
constexpr int kFitRows = 8;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double at(double x) const { return intercept + slope * x; }
};

LineFit fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    return f;
}

// Distinct ridges of the indicator along one row, sub-cell positions in descending order.
std::vector<double> fronts_on_row(const std::vector<double>& I, const SimGrid& g, int j) {
    auto v = [&](int i) { return I[g.index(i, j)]; };
    std::vector<int> peaks;
    for (int i = 1; i + 1 < g.nx; ++i)
        if (v(i) >= kPeakThreshold && v(i) >= v(i - 1) && v(i) > v(i + 1)) peaks.push_back(i);
    std::vector<int> kept;
    for (int p : peaks) {
        if (!kept.empty()) {
            const int q = kept.back();
            double dip = v(q);
            for (int i = q; i <= p; ++i) dip = std::min(dip, v(i));
            if (dip > kDipRatio * std::min(v(p), v(q))) {
                if (v(p) > v(q)) kept.back() = p;
                continue;
            }
        }
        kept.push_back(p);
    }
    std::vector<double> out;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        const int i = *it;
        const double l = v(i - 1), c = v(i), r = v(i + 1);
        const double den = l - 2.0 * c + r;
        out.push_back(i + (den != 0.0 ? 0.5 * (l - r) / den : 0.0));
    }
    return out;
}

}  // namespace

std::string_view to_string(PatternClass c) {
    switch (c) {
        case PatternClass::RR: return "RR";
        case PatternClass::MR: return "MR";
        case PatternClass::undetermined: return "undetermined";
    }
    return "?";
}

std::vector<double> shock_indicator(const SimField& f) {
    const SimGrid& g = f.grid;
    std::vector<double> out(g.size(), 0.0);
    const double h = std::sqrt(g.area);
    double mx = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, g.nx - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, g.ny - 1);
            const double ds = (f.rho[g.index(ir, j)] - f.rho[g.index(il, j)]) / ((ir - il) * g.hs);
            const double dr = (f.rho[g.index(i, jr)] - f.rho[g.index(i, jl)]) / ((jr - jl) * g.hr);
            // grad . a = ds, grad . b = dr with a = (-1, 0)
            const double gx = -ds;
            const double gy = (dr - gx * g.b.x) / g.b.y;
            const double v = std::hypot(gx, gy) * h / f.rho[g.index(i, j)];
            out[g.index(i, j)] = v;
            mx = std::max(mx, v);
        }
    if (mx > 0.0)
        for (double& v : out) v /= mx;
    return out;
}

PatternResult classify_pattern(const SimField& f, int k_stem) {
    const SimGrid& g = f.grid;
    const double an = dot(g.a, f.exact.n);
    const double sR = f.exact.sigma * f.t / an / g.hs;  // exact reflection point, cells from the corner
    if (!(sR >= 100.0)) throw PreconditionError("classify_pattern: incident shock has crossed fewer than 100 cells");

    PatternResult res;
    const auto I = shock_indicator(f);
    const double d_max = 0.5 * sR;
    const int j_max = std::min(g.ny - 1, static_cast<int>(0.5 * sR * g.hs / g.hr));

    std::vector<std::optional<double>> lead(static_cast<std::size_t>(j_max + 1)), second(lead.size());
    for (int j = 0; j <= j_max; ++j) {
        const auto fr = fronts_on_row(I, g, j);
        if (fr.empty()) continue;
        lead[j] = fr[0];
        if (fr.size() > 1 && fr[0] - fr[1] <= d_max) second[j] = fr[1];
    }
    if (!lead[0] || std::abs(*lead[0] - sR) > 0.25 * sR) {
        res.note = "no shock foot near the reflection point on the wall";
        return res;
    }

    // lowest run of rows with two diverging fronts
    int j_t = -1;
    for (int j = 0; j + kFitRows <= j_max && j_t < 0; ++j) {
        bool ok = true;
        for (int k = j; k < j + kFitRows && ok; ++k) {
            ok = lead[k] && second[k];
            if (ok && k > j) ok = (*lead[k] - *second[k]) >= (*lead[k - 1] - *second[k - 1]) - 0.5;
        }
        if (ok) j_t = j;
    }
    if (j_t < 0) {
        res.note = "incident and reflected fronts not separated near the wall";
        return res;
    }
    std::vector<double> rows, sep, pos;
    for (int j = j_t; j < j_t + kFitRows; ++j) {
        rows.push_back(j + 0.5);
        sep.push_back(*lead[j] - *second[j]);
        pos.push_back(*lead[j]);
    }
    const LineFit fs = fit(rows, sep);
    if (!(fs.slope > 0.0)) {
        res.note = "fronts do not diverge away from the wall";
        return res;
    }
    const double r0 = -fs.intercept / fs.slope;
    res.junction_rows = r0;

    if (r0 > k_stem) {
        for (int j = 0; j < static_cast<int>(r0) && j <= j_max; ++j)
            if (!lead[j]) {
                res.note = "junction off the wall without a stem front below it";
                return res;
            }
        const double s_t = fit(rows, pos).at(r0);
        res.classification = PatternClass::MR;
        res.point = g.point((s_t + 0.5) * g.hs, r0 * g.hr) / f.t;
        res.stem_cells = r0;
        res.stem_length = r0 * g.hr * g.sin_theta / f.t;
        return res;
    }
    res.classification = PatternClass::RR;
    res.point = g.point((*lead[0] + 0.5) * g.hs, 0.0) / f.t;
    return res;
}

std::string pattern_json(const PatternResult& p, int indent) {
    nlohmann::ordered_json j;
    j["classification"] = std::string(to_string(p.classification));
    j["point"] = {p.point.x, p.point.y};
    j["stem_length"] = p.stem_length;
    j["stem_cells"] = p.stem_cells;
    j["junction_rows"] = p.junction_rows;
    if (!p.note.empty()) j["note"] = p.note;
    return j.dump(indent);
}

}  // namespace shockrefl
