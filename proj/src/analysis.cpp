#include "cdt/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace cdt {

std::string to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "Stable";
        case StabilityClass::Center: return "Center";
        case StabilityClass::Unstable: return "Unstable";
    }
    return "?";
}

EquilibriumReport classify_stability(const Kappa& k, double center_tol) {
    require_positive(k);
    EquilibriumReport rep;
    rep.kappa = k;
    rep.point = positive_equilibrium(k);
    auto [a2, a1, a0] = charpoly_coefficients(k);
    rep.a2 = a2;
    rep.a1 = a1;
    rep.a0 = a0;
    rep.discriminant = k.discriminant();

    Eigen::EigenSolver<Mat3> solver(jacobian_xyz(k, rep.point));
    for (int i = 0; i < 3; ++i) rep.eigenvalues[i] = solver.eigenvalues()[i];
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    if (std::abs(rep.discriminant) <= center_tol) {
        rep.cls = StabilityClass::Center;
        rep.omega = k.omega();
    } else if (rep.discriminant > 0) {
        rep.cls = StabilityClass::Stable;
    } else {
        rep.cls = StabilityClass::Unstable;
    }
    return rep;
}

nlohmann::json to_json(const EquilibriumReport& rep) {
    nlohmann::json j;
    j["kappa"] = {rep.kappa.k1, rep.kappa.k2, rep.kappa.k3, rep.kappa.k4};
    j["equilibrium"] = {rep.point[0], rep.point[1], rep.point[2]};
    j["charpoly"] = {{"a2", rep.a2}, {"a1", rep.a1}, {"a0", rep.a0}};
    j["eigenvalues"] = nlohmann::json::array();
    for (const auto& ev : rep.eigenvalues) j["eigenvalues"].push_back({{"re", ev.real()}, {"im", ev.imag()}});
    j["class"] = to_string(rep.cls);
    j["discriminant"] = rep.discriminant;
    if (rep.omega) j["omega"] = *rep.omega;
    return j;
}

Eigen::MatrixXd numerical_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
    const auto n = x.size();
    Eigen::MatrixXd j(f(x).size(), n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const double h = 1e-6 * (1.0 + std::abs(x[c]));
        Eigen::VectorXd xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        j.col(c) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

}  // namespace cdt
