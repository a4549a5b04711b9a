#pragma once

#include <optional>
#include <string>

#include "cdt/integrate.hpp"
#include "cdt/params.hpp"
#include "cdt/transform.hpp"

namespace cdt {

/// Standard normal density phi(tau) = e^{-tau^2/2} / sqrt(2 pi).
double normal_pdf(double tau);
/// Standard normal distribution function, computed as erfc(-tau/sqrt(2))/2 so
/// the far left tail keeps full relative accuracy.
double normal_cdf(double tau);

/// Rescaled vector field on the x = 0 facet: (ydot, zdot) = (-y z, -y z + 1).
Vec2 facet_rhs(double y, double z);

enum class CompletenessClass { NotComplete, CompleteInF, CompleteInG1Only, ZAxis };
std::string to_string(CompletenessClass c);

/// Time tau0 with Phi(tau0) = -C, the left end of the domain of the facet
/// solution with -1 < C < 0.
double blowup_time(double C);

/// Member of the facet solution family
///   y(tau) = phi(tau) / (Phi(tau) + C),  z(tau) = y(tau) + tau,
/// indexed by C in (-1, infinity]; C = infinity is the z-axis solution
/// (y = 0, z = tau), kept as an explicit variant.
class FacetSolution {
  public:
    static FacetSolution with_c(double C);  // throws unless C > -1
    static FacetSolution z_axis();

    bool is_z_axis() const { return !c_.has_value(); }
    double c() const;  // throws on the z-axis variant
    /// tau0 with Phi(tau0) + C = 0 when -1 < C < 0, otherwise empty
    /// (solution defined on all of R).
    std::optional<double> domain_start() const { return domain_start_; }

    /// (y, z) at tau; throws outside the domain.
    Vec2 operator()(double tau) const;

    CompletenessClass classify() const;

  private:
    FacetSolution() = default;
    std::optional<double> c_;  // empty = z-axis (C = infinity)
    std::optional<double> domain_start_;
};

CompletenessClass classify_facet_solution(const FacetSolution& sol);

/// The intersection of the center-manifold closure with the boundary:
///   sqrt(2 k4/k3) * (0, phi/Phi, phi/Phi + tau),
/// the C = 0 facet solution scaled back to original coordinates. The curve
/// solves the unscaled equations on the x = 0 facet under tau = sqrt(2 k3 k4) t.
Vec3 boundary_curve(const Kappa& k, double tau);

/// Max residual of the linear law (x + z)(t) = (x + z)(0) + 2 k4 t along a
/// trajectory on the y = 0 facet.
double g2_linearity_residual(const Kappa& k, const Trajectory& traj);

/// Latest time t* <= 0 with x + z = 0 backward along the G2 linear law; past
/// existence inside the orthant is confined to (t*, 0].
double g2_past_existence_bound(const Kappa& k, const Vec3& state);

/// CSV "tau,y,z" for one facet solution over [tau_lo, tau_hi] (clipped to the
/// solution's domain with the given margin).
std::string facet_csv(const FacetSolution& sol, double tau_lo, double tau_hi, int samples,
                      double domain_margin = 0.5);
/// CSV "tau,x,y,z" of the boundary curve.
std::string boundary_curve_csv(const Kappa& k, double tau_lo, double tau_hi, int samples);

}  // namespace cdt
