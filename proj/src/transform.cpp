#include "cdt/transform.hpp"

#include "cdt/rootfind.hpp"

namespace cdt {

LevelSet level_set(const Kappa& k, double L) {
    if (!(L > 0)) throw std::invalid_argument("level_set requires L > 0");
    // H(0, q) - L is strictly convex with minimum -L at q = 0, so both roots
    // are simple and bracketed by [−M, 0] and [0, M].
    const auto g = [&](double q) { return 2 * k.k4 * (std::expm1(q) - q) - L; };
    const auto dg = [&](double q) { return 2 * k.k4 * std::expm1(q); };
    const double M = std::max(10.0, L / k.k4 + 2.0);
    LevelSet ls;
    ls.L = L;
    ls.q_minus = bisect_then_newton(g, dg, -M, 0.0);
    ls.q_plus = bisect_then_newton(g, dg, 0.0, M);
    return ls;
}

Vec3 stable_manifold_point(const Kappa& k, double x) {
    require_center(k);
    const double xmax = std::sqrt(k.k4 / k.k2);
    if (!(x > 0) || x > xmax)
        throw std::invalid_argument("stable manifold is parametrized by x in (0, sqrt(k4/k2)]");
    const double y = k.k4 / (k.k2 * x);
    return {x, y, y - x};
}

}  // namespace cdt
