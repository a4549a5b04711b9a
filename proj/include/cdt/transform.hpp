#pragma once

#include <Eigen/Core>
#include <cmath>

#include "cdt/analysis.hpp"
#include "cdt/params.hpp"

namespace cdt {

template <typename S>
using Vector2 = Eigen::Matrix<S, 2, 1>;
using Vec2 = Vector2<double>;

/// The constant of motion of the center case (k1 = k2 + k3):
///   V = (k2/2)(x - y + z)^2 + 2 k2 x y - 2 k4 log(x y),  x, y > 0.
template <typename S>
S constant_of_motion(const KappaT<S>& k, const Vector3<S>& s) {
    const S x = s[0], y = s[1], z = s[2];
    if (!(x > 0 && y > 0)) throw std::invalid_argument("constant of motion requires x > 0 and y > 0");
    const S p = x - y + z;
    return k.k2 / 2 * p * p + 2 * k.k2 * x * y - 2 * k.k4 * (std::log(x) + std::log(y));
}

/// Global minimum of the constant of motion, attained exactly on the stable
/// manifold set {x - y + z = 0, x y = k4/k2}.
template <typename S>
S constant_of_motion_minimum(const KappaT<S>& k) {
    return 2 * k.k4 - 2 * k.k4 * std::log(k.k4 / k.k2);
}

/// Coordinate change (x,y,z) -> (p,q,r):
///   p = x - y + z,  q = log(x y k2 / k4),  r = -log x + log sqrt(k3 k4/(k1 k2)).
/// A diffeomorphism from {x > 0, y > 0} onto R^3; the positive equilibrium
/// maps to the origin.
template <typename S>
Vector3<S> to_pqr(const KappaT<S>& k, const Vector3<S>& s) {
    const S x = s[0], y = s[1], z = s[2];
    if (!(x > 0 && y > 0)) throw std::invalid_argument("to_pqr requires x > 0 and y > 0");
    const S xstar = std::sqrt(k.k3 * k.k4 / (k.k1 * k.k2));
    return {x - y + z, std::log(x) + std::log(y) - std::log(k.k4 / k.k2), -std::log(x) + std::log(xstar)};
}

/// Inverse of to_pqr; defined on all of R^3, with image z-coordinate of
/// either sign.
template <typename S>
Vector3<S> from_pqr(const KappaT<S>& k, const Vector3<S>& u) {
    const S p = u[0], q = u[1], r = u[2];
    const S a = k.alpha();
    const S x = a / k.k1 * std::exp(-r);
    const S y = a / k.k3 * std::exp(q + r);
    return {x, y, p - x + y};
}

/// Vector field in (p,q,r) coordinates (valid in the center case):
///   pdot = -2 k4 (e^q - 1),  qdot = k2 p,  rdot = -k1 p + alpha (e^-r - e^{q+r}).
template <typename S>
Vector3<S> rhs_pqr(const KappaT<S>& k, const Vector3<S>& u) {
    const S p = u[0], q = u[1], r = u[2];
    return {-2 * k.k4 * std::expm1(q), k.k2 * p, -k.k1 * p + k.alpha() * (std::exp(-r) - std::exp(q + r))};
}

/// The decoupled planar (p,q) subsystem.
template <typename S>
Vector2<S> rhs_planar(const KappaT<S>& k, const Vector2<S>& u) {
    return {-2 * k.k4 * std::expm1(u[1]), k.k2 * u[0]};
}

/// Hamiltonian of the planar subsystem:
///   H = (k2/2) p^2 + 2 k4 (e^q - q - 1) >= 0, zero only at the origin.
template <typename S>
S hamiltonian(const KappaT<S>& k, S p, S q) {
    return k.k2 / 2 * p * p + 2 * k.k4 * (std::expm1(q) - q);
}

/// Level set H(0, q) = L: the two q-axis crossings q_minus < 0 < q_plus.
struct LevelSet {
    double L;
    double q_plus;
    double q_minus;
};

/// Solve H(0, q) = L for both roots by bracketed bisection plus Newton
/// polish. Requires L > 0.
LevelSet level_set(const Kappa& k, double L);

/// Point of the stable manifold {x - y + z = 0, x y = k4/k2} parametrized by
/// x in (0, sqrt(k4/k2)]: returns (x, k4/(k2 x), k4/(k2 x) - x) with z >= 0.
Vec3 stable_manifold_point(const Kappa& k, double x);

}  // namespace cdt
