#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <optional>

#include "cdt/params.hpp"

#include <json.hpp>

namespace cdt {

template <typename S>
using Vector3 = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Matrix3 = Eigen::Matrix<S, 3, 3>;
using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// Vector field of the built-in four-reaction oscillator:
///   xdot = x (k1 z - k2 y)
///   ydot = y (k2 x - k3 z)
///   zdot = z (-k3 y - k1 x) + 2 k4
template <typename S>
Vector3<S> rhs_xyz(const KappaT<S>& k, const Vector3<S>& s) {
    const S x = s[0], y = s[1], z = s[2];
    return {x * (k.k1 * z - k.k2 * y), y * (k.k2 * x - k.k3 * z), z * (-k.k3 * y - k.k1 * x) + 2 * k.k4};
}

/// Analytic Jacobian of rhs_xyz.
template <typename S>
Matrix3<S> jacobian_xyz(const KappaT<S>& k, const Vector3<S>& s) {
    const S x = s[0], y = s[1], z = s[2];
    Matrix3<S> j;
    j << k.k1 * z - k.k2 * y, -k.k2 * x, k.k1 * x,
         k.k2 * y, k.k2 * x - k.k3 * z, -k.k3 * y,
         -k.k1 * z, -k.k3 * z, -k.k3 * y - k.k1 * x;
    return j;
}

/// The unique positive equilibrium
///   (sqrt(k3 k4 / (k1 k2)), sqrt(k1 k4 / (k2 k3)), sqrt(k2 k4 / (k1 k3))).
template <typename S>
Vector3<S> positive_equilibrium(const KappaT<S>& k) {
    return {std::sqrt(k.k3 * k.k4 / (k.k1 * k.k2)), std::sqrt(k.k1 * k.k4 / (k.k2 * k.k3)),
            std::sqrt(k.k2 * k.k4 / (k.k1 * k.k3))};
}

/// Coefficients (a2, a1, a0) of the characteristic polynomial
/// lambda^3 + a2 lambda^2 + a1 lambda + a0 of the Jacobian at the positive
/// equilibrium, in closed form:
///   a2 = 2 sqrt(k1 k3 k4 / k2),  a1 = (k1 + k2 - k3) k4,
///   a0 = 4 sqrt(k1 k2 k3 k4^3).
template <typename S>
std::array<S, 3> charpoly_coefficients(const KappaT<S>& k) {
    return {2 * std::sqrt(k.k1 * k.k3 * k.k4 / k.k2), (k.k1 + k.k2 - k.k3) * k.k4,
            4 * std::sqrt(k.k1 * k.k2 * k.k3 * k.k4 * k.k4 * k.k4)};
}

enum class StabilityClass { Stable, Center, Unstable };

std::string to_string(StabilityClass c);

struct EquilibriumReport {
    Kappa kappa;
    Vec3 point;
    double a2, a1, a0;
    std::array<std::complex<double>, 3> eigenvalues;  // sorted by (re, im)
    StabilityClass cls;
    double discriminant;          // k1 - k2 - k3
    std::optional<double> omega;  // sqrt(2 k2 k4), present iff Center
};

/// Routh-Hurwitz classification of the positive equilibrium. The class is
/// decided by the sign of k1 - k2 - k3, with |disc| <= center_tol treated as
/// the center case. Eigenvalues are computed numerically from the Jacobian.
EquilibriumReport classify_stability(const Kappa& k, double center_tol = 1e-12);

nlohmann::json to_json(const EquilibriumReport& rep);

/// Central-difference Jacobian of an arbitrary vector field, step
/// 1e-6 * (1 + |x_j|) per column.
Eigen::MatrixXd numerical_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x);

}  // namespace cdt
