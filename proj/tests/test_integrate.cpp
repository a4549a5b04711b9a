#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cdt/integrate.hpp"
#include "cdt/network.hpp"
#include "cdt/transform.hpp"

using namespace cdt;

namespace {

Rhs harmonic() {
    return [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        Eigen::VectorXd d(2);
        d << -y[1], y[0];
        return d;
    };
}

Rhs pqr_field(const Kappa& k) {
    return [k](double, const Eigen::VectorXd& u) -> Eigen::VectorXd {
        return rhs_pqr(k, Vec3(u[0], u[1], u[2]));
    };
}

Rhs xyz_field(const Kappa& k) {
    return [k](double, const Eigen::VectorXd& s) -> Eigen::VectorXd {
        return rhs_xyz(k, Vec3(s[0], s[1], s[2]));
    };
}

}  // namespace

TEST_CASE("harmonic oscillator returns after one period") {
    Eigen::VectorXd y0(2);
    y0 << 0.0, 1.0;
    const auto traj = integrate(harmonic(), y0, 0.0, 2 * M_PI, {});
    CHECK(traj.status == IntegrationStatus::Completed);
    CHECK((traj.back() - y0).norm() <= 1e-8);
}

TEST_CASE("exponential growth against the exact solution") {
    Eigen::VectorXd y0(1);
    y0 << 1.0;
    const auto traj = integrate(
        [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return y; }, y0, 0.0, 5.0, {});
    CHECK(std::abs(traj.back()[0] - std::exp(5.0)) <= 1e-8 * std::exp(5.0));
    // dense output mid-span
    CHECK(std::abs(traj.at(2.5)[0] - std::exp(2.5)) <= 1e-8 * std::exp(2.5));
}

TEST_CASE("trajectory bookkeeping invariants") {
    Eigen::VectorXd y0(2);
    y0 << 0.0, 1.0;
    const auto traj = integrate(harmonic(), y0, 0.0, 10.0, {});
    const auto& ts = traj.times();
    for (size_t i = 0; i + 1 < ts.size(); ++i) CHECK(ts[i] < ts[i + 1]);
    for (size_t i = 0; i < ts.size(); ++i)
        CHECK((traj.at(ts[i]) - traj.states()[i]).norm() <= 1e-12);
    CHECK(traj.t1() == 10.0);
    CHECK(traj.stats.accepted + 1 == static_cast<long>(ts.size()));
    CHECK(traj.stats.rhs_evaluations > 6 * traj.stats.accepted);
    CHECK_THROWS_AS(traj.at(10.5), std::out_of_range);
    CHECK_THROWS_AS(integrate(harmonic(), y0, 1.0, 1.0, {}), std::invalid_argument);
}

TEST_CASE("V drift over the center flow stays tiny") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd s0(3);
    s0 << 1, 1, 1;
    const auto traj = integrate(xyz_field(k), s0, 0.0, 100.0, {});
    const double drift = conserved_drift(traj, [&](const Eigen::VectorXd& s) {
        return constant_of_motion(k, Vec3(s[0], s[1], s[2]));
    });
    CHECK(drift <= 1e-6);
}

TEST_CASE("planar periodicity of the transformed system") {
    const Kappa k{2, 1, 1, 1};
    // one full period of the planar orbit through (0, 1): frozen from the
    // independent quadrature oracle (see test_poincare)
    const double tau = 4.712057781718;
    for (double r : {-1.0, 0.0, 2.0}) {
        Eigen::VectorXd u0(3);
        u0 << 0.0, 1.0, r;
        const auto traj = integrate(pqr_field(k), u0, 0.0, tau, {});
        CHECK(std::abs(traj.back()[0] - 0.0) <= 1e-8);
        CHECK(std::abs(traj.back()[1] - 1.0) <= 1e-8);
    }
}

TEST_CASE("event location: linear clock") {
    Eigen::VectorXd y0(2);
    y0 << 0.0, 1.0;
    const auto traj = integrate(harmonic(), y0, 0.0, 10.0, {});
    const auto hits = locate_event(traj, [](double t, const Eigen::VectorXd&) { return t - 5.0; });
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].time == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("event location: two section crossings per planar period") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd u0(3);
    u0 << 0.0, 1.0, 0.0;
    const double tau = 4.712057781718;
    // two and a half periods starting exactly on the section: the start is
    // not an event, leaving 2 crossings per period, alternating directions
    const auto traj = integrate(pqr_field(k), u0, 0.0, 2.5 * tau, {});
    const auto hits = locate_event(traj, [](double, const Eigen::VectorXd& u) { return u[0]; });
    REQUIRE(hits.size() == 5);
    for (size_t i = 0; i < hits.size(); ++i) {
        const bool rising_hit = i % 2 == 0;  // bottom crossings come first
        CHECK((hits[i].state[1] < 0) == rising_hit);
    }
    const auto rising = locate_event(
        traj, [](double, const Eigen::VectorXd& u) { return u[0]; }, EventDirection::Rising);
    CHECK(rising.size() == 3);
    const auto falling = locate_event(
        traj, [](double, const Eigen::VectorXd& u) { return u[0]; }, EventDirection::Falling);
    CHECK(falling.size() == 2);
    CHECK(falling[0].time == doctest::Approx(tau).epsilon(1e-8));
}

TEST_CASE("no falling zero crossings of z when z stays positive") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd s0(3);
    s0 << 1.0, 1.0, 0.01;
    const auto traj = integrate(xyz_field(k), s0, 0.0, 20.0, {});
    const auto hits = locate_event(
        traj, [](double, const Eigen::VectorXd& s) { return s[2]; }, EventDirection::Falling);
    CHECK(hits.empty());
}

TEST_CASE("event times insensitive to max_step") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd u0(3);
    u0 << 0.5, 0.5, 0.0;
    auto event_time = [&](double max_step) {
        IntegratorConfig cfg;
        cfg.max_step = max_step;
        const auto traj = integrate(pqr_field(k), u0, 0.0, 6.0, cfg);
        const auto hits = locate_event(traj, [](double, const Eigen::VectorXd& u) { return u[0]; });
        REQUIRE(!hits.empty());
        return hits[0].time;
    };
    CHECK(std::abs(event_time(1e9) - event_time(0.05)) <= 1e-9);
}

TEST_CASE("conserved drift of a constant is zero; linear invariant at rounding level") {
    const auto iva = builtin(Builtin::ivanova);
    const MassActionSystem sys(iva, SystemParams({{"k1", 1.0}, {"k2", 1.0}, {"k3", 1.0}}));
    Eigen::VectorXd s0(3);
    s0 << 0.6, 1.2, 0.9;
    const auto traj = integrate([&](double, const Eigen::VectorXd& s) { return sys(s); }, s0, 0.0, 50.0, {});
    CHECK(conserved_drift(traj, [](const Eigen::VectorXd&) { return 3.14; }) == 0.0);
    CHECK(conserved_drift(traj, [](const Eigen::VectorXd& s) { return s.sum(); }) <= 1e-12);
}

TEST_CASE("lotka first integral drift") {
    const auto lotka = builtin(Builtin::lotka);
    const MassActionSystem sys(lotka, SystemParams({{"k1", 1.0}, {"k2", 1.0}, {"k3", 1.0}}));
    Eigen::VectorXd s0(2);
    s0 << 1.0, 2.0;
    const auto traj = integrate([&](double, const Eigen::VectorXd& s) { return sys(s); }, s0, 0.0, 100.0, {});
    const double drift = conserved_drift(traj, [](const Eigen::VectorXd& s) {
        return s[0] * s[1] * std::exp(-(s[0] + s[1]));
    });
    CHECK(drift <= 1e-6);
}

TEST_CASE("tightening tolerances reduces the observed drift") {
    const Kappa k{2, 1, 1, 1};
    Eigen::VectorXd u0(3);
    u0 << 0.0, 1.0, 0.5;
    auto drift_at = [&](double rtol) {
        IntegratorConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = rtol * 1e-2;
        const auto traj = integrate(pqr_field(k), u0, 0.0, 50.0, cfg);
        return conserved_drift(traj,
                               [&](const Eigen::VectorXd& u) { return hamiltonian(k, u[0], u[1]); });
    };
    // order-4 error control: halving both tolerances contracts the drift by
    // at least 2 once the ratio is measured across a factor-4 window
    const double d1 = drift_at(1e-7), d2 = drift_at(0.25e-7);
    CHECK(d2 < d1);
    CHECK(d1 / d2 >= 2.0);
}

TEST_CASE("positivity guard halts decay through zero") {
    Eigen::VectorXd y0(1);
    y0 << 0.5;
    IntegratorConfig cfg;
    cfg.positivity_guard = true;
    const auto traj = integrate(
        [](double, const Eigen::VectorXd&) -> Eigen::VectorXd {
            Eigen::VectorXd d(1);
            d << -1.0;
            return d;
        },
        y0, 0.0, 2.0, cfg);
    CHECK(traj.status == IntegrationStatus::PositivityGuard);
    CHECK(traj.back()[0] >= 0.0);
    CHECK(traj.t1() < 2.0);
    CHECK(traj.stats.rejected > 0);
}

TEST_CASE("finite-time blow-up reports step underflow with the last state") {
    Eigen::VectorXd y0(1);
    y0 << 1.0;
    const auto traj = integrate(
        [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
            Eigen::VectorXd d(1);
            d << y[0] * y[0];
            return d;
        },
        y0, 0.0, 2.0, {});
    CHECK((traj.status == IntegrationStatus::StepUnderflow ||
           traj.status == IntegrationStatus::NonFinite));
    CHECK(traj.t1() <= 1.0 + 1e-6);
    CHECK(traj.back()[0] > 1e6);
}

TEST_CASE("csv dump shape and dense resampling") {
    Eigen::VectorXd y0(2);
    y0 << 0.0, 1.0;
    const auto traj = integrate(harmonic(), y0, 0.0, 1.0, {});
    const std::string csv = trajectory_csv(traj, {"p", "q"});
    CHECK(csv.rfind("t,p,q\n", 0) == 0);
    const std::string dense = trajectory_csv(traj, {"p", "q"}, 11);
    CHECK(std::count(dense.begin(), dense.end(), '\n') == 12);  // header + 11 rows
}
