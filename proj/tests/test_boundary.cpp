#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdt/boundary.hpp"
#include "cdt/network.hpp"

using namespace cdt;

namespace {

Rhs xyz_field(const Kappa& k) {
    return [k](double, const Eigen::VectorXd& s) -> Eigen::VectorXd {
        return rhs_xyz(k, Vec3(s[0], s[1], s[2]));
    };
}

// 5-point central difference of a curve component
template <typename F>
Vec2 deriv5(const F& f, double t, double h = 1e-3) {
    return (8.0 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h))) / (12.0 * h);
}

}  // namespace

TEST_CASE("normal distribution helpers") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // far left tail keeps relative accuracy through erfc
    CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160526e-24).epsilon(1e-13));
    CHECK(normal_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("facet vector field point values and exact difference law") {
    CHECK(facet_rhs(0.0, 3.0).isApprox(Vec2{0.0, 1.0}, 1e-15));
    CHECK(facet_rhs(1.0, 1.0).isApprox(Vec2{-1.0, 0.0}, 1e-15));
    // d/dtau (z - y) = 1 for any (y, z)
    for (double y : {0.1, 1.0, 4.0})
        for (double z : {-2.0, 0.0, 3.0}) {
            const Vec2 d = facet_rhs(y, z);
            CHECK(d[1] - d[0] == doctest::Approx(1.0).epsilon(1e-15));
        }
}

TEST_CASE("facet solution family point values") {
    const auto sol0 = FacetSolution::with_c(0.0);
    const Vec2 yz = sol0(0.0);
    CHECK(yz[0] == doctest::Approx(0.7978845608028654).epsilon(1e-14));
    CHECK(yz[1] == doctest::Approx(0.7978845608028654).epsilon(1e-14));
    CHECK_FALSE(sol0.domain_start().has_value());

    const auto zaxis = FacetSolution::z_axis();
    CHECK(zaxis.is_z_axis());
    for (double tau : {-3.0, 0.0, 5.0}) CHECK(zaxis(tau).isApprox(Vec2{0.0, tau}, 1e-15));
    CHECK_THROWS_AS(zaxis.c(), std::logic_error);

    CHECK_THROWS_AS(FacetSolution::with_c(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(FacetSolution::with_c(-1.5), std::invalid_argument);
}

TEST_CASE("solutions with -1 < C < 0 stop at the blow-up time") {
    const auto sol = FacetSolution::with_c(-0.3);
    REQUIRE(sol.domain_start().has_value());
    const double tau0 = *sol.domain_start();
    CHECK(normal_cdf(tau0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(sol(tau0 - 0.1), std::domain_error);
    CHECK(sol(tau0 + 0.05)[0] > 10.0);  // blowing up near the edge
}

TEST_CASE("closed form satisfies the facet equations (derivative oracle)") {
    for (double C : {-0.3, 0.0, 1.0}) {
        const auto sol = FacetSolution::with_c(C);
        double lo = -5.0;
        if (sol.domain_start()) lo = std::max(lo, *sol.domain_start() + 0.5);
        for (int i = 0; i <= 100; ++i) {
            const double tau = lo + (5.0 - lo) * i / 100.0;
            const Vec2 d = deriv5([&](double t) { return sol(t); }, tau);
            const Vec2 yz = sol(tau);
            CHECK((d - facet_rhs(yz[0], yz[1])).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }
}

TEST_CASE("blow-up times") {
    CHECK(std::abs(blowup_time(-0.5)) <= 1e-12);
    CHECK(blowup_time(-0.999) > 3.0);
    CHECK(blowup_time(-0.001) < -3.0);
    CHECK(normal_cdf(blowup_time(-0.3)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(blowup_time(0.0), std::invalid_argument);
    CHECK_THROWS_AS(blowup_time(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(blowup_time(0.5), std::invalid_argument);
}

TEST_CASE("completeness classes") {
    CHECK(FacetSolution::with_c(-0.3).classify() == CompletenessClass::NotComplete);
    CHECK(FacetSolution::with_c(0.0).classify() == CompletenessClass::CompleteInF);
    CHECK(FacetSolution::with_c(2.0).classify() == CompletenessClass::CompleteInG1Only);
    CHECK(FacetSolution::z_axis().classify() == CompletenessClass::ZAxis);
    CHECK(classify_facet_solution(FacetSolution::with_c(0.0)) == CompletenessClass::CompleteInF);
    // for C > 0 the solution exists for all tau but z drops below zero
    const auto sol = FacetSolution::with_c(2.0);
    CHECK(sol(-10.0)[1] < -5.0);
}

TEST_CASE("boundary curve values and tails") {
    const Kappa k{2, 1, 1, 1};
    const double scale = std::sqrt(2 * k.k4 / k.k3);
    const Vec3 at0 = boundary_curve(k, 0.0);
    CHECK(at0[0] == 0.0);
    CHECK(at0[1] == doctest::Approx(scale * 0.7978845608028654).epsilon(1e-14));
    CHECK(at0[2] == doctest::Approx(at0[1]).epsilon(1e-14));

    // right tail: y collapses like the Gaussian, z grows linearly
    const Vec3 at8 = boundary_curve(k, 8.0);
    CHECK(at8[1] <= 1e-12);
    CHECK(at8[2] == doctest::Approx(scale * 8.0).epsilon(1e-12));

    // left tail: frozen high-precision value of yz/(2 k4/k3) at tau = -8
    const Vec3 atm8 = boundary_curve(k, -8.0);
    const double ratio = atm8[1] * atm8[2] / (2 * k.k4 / k.k3);
    CHECK(ratio == doctest::Approx(0.985675116557).epsilon(1e-9));

    // y is strictly decreasing wherever z > 0
    double prev_y = 1e300;
    for (double tau = -8.0; tau <= 8.0; tau += 0.25) {
        const Vec3 s = boundary_curve(k, tau);
        if (s[2] > 0) {
            CHECK(s[1] < prev_y);
            prev_y = s[1];
        }
    }
    CHECK_THROWS_AS(boundary_curve(Kappa{2.5, 1, 1, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("boundary curve solves the unscaled equations on the facet") {
    const Kappa k{2, 1, 1.5, 0.8};
    const Kappa kc = centered(k);
    const double rate = std::sqrt(2 * kc.k3 * kc.k4);  // dtau/dt
    for (double t : {-1.0, 0.0, 0.7}) {
        const auto curve_t = [&](double tt) -> Vec3 { return boundary_curve(kc, rate * tt); };
        const Vec3 d = (8.0 * (curve_t(t + 1e-4) - curve_t(t - 1e-4)) -
                        (curve_t(t + 2e-4) - curve_t(t - 2e-4))) /
                       (12.0 * 1e-4);
        const Vec3 f = rhs_xyz(kc, curve_t(t));
        CHECK((d - f).cwiseAbs().maxCoeff() <= 1e-7 * (1 + f.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("numeric facet trajectories keep d/dtau(z - y) = 1") {
    // rescaled facet system integrated numerically; z - y - tau stays constant
    const auto rhs = [](double, const Eigen::VectorXd& u) -> Eigen::VectorXd {
        const Vec2 d = facet_rhs(u[0], u[1]);
        return Eigen::Vector2d(d[0], d[1]);
    };
    Eigen::VectorXd u0(2);
    u0 << 0.8, 0.8;
    const auto traj = integrate(rhs, u0, 0.0, 10.0, {});
    double worst = 0;
    for (size_t i = 0; i < traj.times().size(); ++i) {
        const double t = traj.times()[i];
        const auto& u = traj.states()[i];
        worst = std::max(worst, std::abs((u[1] - u[0]) - (u0[1] - u0[0]) - t));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("G2 facet trajectories obey the linear law exactly") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd s0(3);
    s0 << 1.0, 0.0, 1.0;
    const auto traj = integrate(xyz_field(k), s0, 0.0, 10.0, {});
    CHECK(traj.status == IntegrationStatus::Completed);
    CHECK(g2_linearity_residual(k, traj) <= 1e-8);
    // y = 0 is invariant bitwise under the compiled mass-action field
    for (const auto& s : traj.states()) CHECK(s[1] == 0.0);
    CHECK(g2_past_existence_bound(k, Vec3{1, 0, 1}) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("origin ray inside G2: x stays zero and z grows linearly") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd s0 = Eigen::VectorXd::Zero(3);
    const auto traj = integrate(xyz_field(k), s0, 0.0, 5.0, {});
    for (size_t i = 0; i < traj.times().size(); ++i) {
        CHECK(traj.states()[i][0] == 0.0);
        CHECK(traj.states()[i][1] == 0.0);
        CHECK(traj.states()[i][2] ==
              doctest::Approx(2 * k.k4 * traj.times()[i]).epsilon(1e-12));
    }
}

TEST_CASE("csv emitters") {
    const auto sol = FacetSolution::with_c(-0.3);
    const std::string csv = facet_csv(sol, -5.0, 5.0, 101);
    CHECK(csv.rfind("tau,y,z\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
    // clipped to the domain: first sample sits right of tau0
    const double first_tau = std::stod(csv.substr(csv.find('\n') + 1));
    CHECK(first_tau > *sol.domain_start());

    const std::string curve = boundary_curve_csv(Kappa{2, 1, 1, 1}, -8.0, 8.0, 11);
    CHECK(curve.rfind("tau,x,y,z\n", 0) == 0);
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 12);
}
