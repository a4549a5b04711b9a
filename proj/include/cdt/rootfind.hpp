#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace cdt {

/// Bisection on [a, b] (f(a) and f(b) of opposite sign) down to interval
/// width xtol, returning the midpoint of the final bracket.
inline double bisect(const std::function<double(double)>& f, double a, double b, double xtol,
                     int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw std::invalid_argument("bisect: no sign change in bracket");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // bracket at floating-point resolution
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return 0.5 * (a + b);
}

/// Bisection followed by a few Newton polishing steps, kept inside the
/// original bracket.
inline double bisect_then_newton(const std::function<double(double)>& f,
                                 const std::function<double(double)>& df, double a, double b,
                                 double bisect_xtol = 1e-8, int newton_steps = 4) {
    double x = bisect(f, a, b, bisect_xtol);
    for (int i = 0; i < newton_steps; ++i) {
        const double d = df(x);
        if (d == 0.0) break;
        const double step = f(x) / d;
        const double xn = x - step;
        if (!(xn > a && xn < b)) break;
        x = xn;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

}  // namespace cdt
