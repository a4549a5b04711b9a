#include "cdt/boundary.hpp"

#include <cmath>
#include <cstdio>

#include "cdt/rootfind.hpp"

namespace cdt {

double normal_pdf(double tau) { return std::exp(-0.5 * tau * tau) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double tau) { return 0.5 * std::erfc(-tau / std::sqrt(2.0)); }

Vec2 facet_rhs(double y, double z) { return {-y * z, -y * z + 1.0}; }

std::string to_string(CompletenessClass c) {
    switch (c) {
        case CompletenessClass::NotComplete: return "NotComplete";
        case CompletenessClass::CompleteInF: return "CompleteInF";
        case CompletenessClass::CompleteInG1Only: return "CompleteInG1Only";
        case CompletenessClass::ZAxis: return "ZAxis";
    }
    return "?";
}

double blowup_time(double C) {
    if (!(C > -1.0 && C < 0.0)) throw std::invalid_argument("blowup_time requires -1 < C < 0");
    // Phi is strictly increasing; expand the bracket into the tails as needed.
    const auto g = [C](double tau) { return normal_cdf(tau) + C; };
    double a = -9.0, b = 9.0;
    while (g(a) > 0.0 && a > -40.0) a -= 8.0;
    while (g(b) < 0.0 && b < 40.0) b += 8.0;
    if (g(a) > 0.0 || g(b) < 0.0) throw std::runtime_error("blowup_time: C too close to the domain edge");
    return bisect_then_newton(g, normal_pdf, a, b, 1e-10, 6);
}

FacetSolution FacetSolution::with_c(double C) {
    if (!(C > -1.0)) throw std::invalid_argument("facet solution family requires C > -1");
    FacetSolution s;
    s.c_ = C;
    if (C < 0.0) s.domain_start_ = blowup_time(C);
    return s;
}

FacetSolution FacetSolution::z_axis() { return FacetSolution(); }

double FacetSolution::c() const {
    if (!c_) throw std::logic_error("the z-axis solution has no finite C");
    return *c_;
}

Vec2 FacetSolution::operator()(double tau) const {
    if (!c_) return {0.0, tau};
    if (domain_start_ && !(tau > *domain_start_))
        throw std::domain_error("facet solution not defined at tau <= tau0");
    const double y = normal_pdf(tau) / (normal_cdf(tau) + *c_);
    return {y, y + tau};
}

CompletenessClass FacetSolution::classify() const {
    if (!c_) return CompletenessClass::ZAxis;
    if (*c_ < 0.0) return CompletenessClass::NotComplete;
    if (*c_ == 0.0) return CompletenessClass::CompleteInF;
    return CompletenessClass::CompleteInG1Only;
}

CompletenessClass classify_facet_solution(const FacetSolution& sol) { return sol.classify(); }

Vec3 boundary_curve(const Kappa& k, double tau) {
    require_center(k);
    const double scale = std::sqrt(2.0 * k.k4 / k.k3);
    const double ratio = normal_pdf(tau) / normal_cdf(tau);
    return {0.0, scale * ratio, scale * (ratio + tau)};
}

double g2_linearity_residual(const Kappa& k, const Trajectory& traj) {
    const double c0 = traj.front()[0] + traj.front()[2];
    double worst = 0.0;
    for (size_t i = 0; i < traj.times().size(); ++i) {
        const double t = traj.times()[i] - traj.t0();
        const auto& s = traj.states()[i];
        worst = std::max(worst, std::abs(s[0] + s[2] - c0 - 2.0 * k.k4 * t));
    }
    return worst;
}

double g2_past_existence_bound(const Kappa& k, const Vec3& state) {
    return -state[2] / (2.0 * k.k4);
}

std::string facet_csv(const FacetSolution& sol, double tau_lo, double tau_hi, int samples,
                      double domain_margin) {
    if (sol.domain_start()) tau_lo = std::max(tau_lo, *sol.domain_start() + domain_margin);
    std::string out = "tau,y,z\n";
    char b[96];
    for (int i = 0; i < samples; ++i) {
        const double tau = tau_lo + (tau_hi - tau_lo) * i / (samples - 1);
        const Vec2 yz = sol(tau);
        std::snprintf(b, sizeof b, "%.17g,%.17g,%.17g\n", tau, yz[0], yz[1]);
        out += b;
    }
    return out;
}

std::string boundary_curve_csv(const Kappa& k, double tau_lo, double tau_hi, int samples) {
    std::string out = "tau,x,y,z\n";
    char b[128];
    for (int i = 0; i < samples; ++i) {
        const double tau = tau_lo + (tau_hi - tau_lo) * i / (samples - 1);
        const Vec3 s = boundary_curve(k, tau);
        std::snprintf(b, sizeof b, "%.17g,%.17g,%.17g,%.17g\n", tau, s[0], s[1], s[2]);
        out += b;
    }
    return out;
}

}  // namespace cdt
