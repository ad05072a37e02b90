#pragma once

// Bracketed scalar solvers shared by the shock, polar and reflection layers.

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <utility>

#include "shockrefl/errors.hpp"

namespace shockrefl::roots {

struct Extremum {
    double x;
    double fx;
};

/// Safeguarded Newton on [lo, hi]. `fdf(x)` returns {f, f'}. f(lo), f(hi) must differ in sign.
/// Falls back to bisection whenever the Newton step leaves the bracket or converges slowly.
template <class FDF>
double newton_bisect(FDF&& fdf, double lo, double hi, double rtol, int max_iter = 200) {
    auto [flo, dlo] = fdf(lo);
    auto [fhi, dhi] = fdf(hi);
    (void)dlo;
    (void)dhi;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "newton_bisect: no sign change on [" << lo << ", " << hi << "], f = (" << flo << ", "
           << fhi << ")";
        throw NumericalError(os.str());
    }
    // Orient so that f(xl) < 0 < f(xh).
    double xl = flo < 0.0 ? lo : hi;
    double xh = flo < 0.0 ? hi : lo;
    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    auto [f, df] = fdf(x);
    for (int it = 0; it < max_iter; ++it) {
        const bool newton_leaves = ((x - xh) * df - f) * ((x - xl) * df - f) > 0.0;
        const bool newton_slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        dx_old = dx;
        if (newton_leaves || newton_slow || df == 0.0) {
            dx = 0.5 * (xh - xl);
            x = xl + dx;
        } else {
            dx = f / df;
            x -= dx;
        }
        if (std::abs(dx) <= rtol * std::abs(x) + std::numeric_limits<double>::min()) return x;
        std::tie(f, df) = fdf(x);
        if (f == 0.0) return x;
        if (f < 0.0)
            xl = x;
        else
            xh = x;
        if (std::abs(xh - xl) <= rtol * std::abs(x)) return x;
    }
    throw NumericalError("newton_bisect: no convergence");
}

/// Brent's method on [a, b]; f(a), f(b) must differ in sign.
template <class F>
double brent(F&& f, double a, double b, double xtol, int max_iter = 300) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "brent: no sign change on [" << a << ", " << b << "], f = (" << fa << ", " << fb << ")";
        throw NumericalError(os.str());
    }
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericalError("brent: no convergence");
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_max(F&& f, double a, double b, double xtol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (std::abs(b - a) > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

}  // namespace shockrefl::roots
