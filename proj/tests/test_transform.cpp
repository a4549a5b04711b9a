#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cdt/transform.hpp"

using namespace cdt;

namespace {
double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
double log_uniform(std::mt19937_64& g, double lo, double hi) {
    return lo * std::exp(u01(g) * std::log(hi / lo));
}

// dV = (k2 p + 2 k2 y - 2 k4 / x, -k2 p + 2 k2 x - 2 k4 / y, k2 p), p = x - y + z
Vec3 grad_V(const Kappa& k, const Vec3& s) {
    const double x = s[0], y = s[1], z = s[2], p = x - y + z;
    return {k.k2 * p + 2 * k.k2 * y - 2 * k.k4 / x, -k.k2 * p + 2 * k.k2 * x - 2 * k.k4 / y, k.k2 * p};
}
}  // namespace

TEST_CASE("constant of motion values") {
    const Kappa k{2, 1, 1, 1};
    CHECK(constant_of_motion(k, positive_equilibrium(k)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(constant_of_motion(k, Vec3{1, 1, 1}) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK_THROWS_AS(constant_of_motion(k, Vec3{-1, 1, 0}), std::invalid_argument);
}

TEST_CASE("global minimum of V sits on the stable manifold") {
    const Kappa k{2, 1, 1, 1};
    const double vmin = constant_of_motion_minimum(k);
    CHECK(vmin == doctest::Approx(2 * k.k4 - 2 * k.k4 * std::log(k.k4 / k.k2)).epsilon(1e-14));
    for (double x : {0.1, 0.4, 0.9}) {
        CHECK(constant_of_motion(k, stable_manifold_point(k, x)) == doctest::Approx(vmin).epsilon(1e-12));
    }
    std::mt19937_64 gen(21);
    for (int i = 0; i < 500; ++i) {
        const Vec3 s{log_uniform(gen, 0.05, 5), log_uniform(gen, 0.05, 5), log_uniform(gen, 0.05, 5)};
        CHECK(constant_of_motion(k, s) >= vmin - 1e-12);
    }
}

TEST_CASE("coordinate change point values") {
    const Kappa k{2, 1, 1, 1};
    const Vec3 u = to_pqr(k, Vec3{1, 1, 1});
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(u[2] == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-14));

    CHECK(from_pqr(k, Vec3(Vec3::Zero())).isApprox(positive_equilibrium(k), 1e-14));

    const Vec3 s = from_pqr(k, Vec3{-3, 0, 0});
    CHECK(s[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s[2] == doctest::Approx(-3 - std::sqrt(0.5) + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s[2] < 0);  // the inverse maps into R^3, not the orthant

    CHECK_THROWS_AS(to_pqr(k, Vec3{0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("mutual inverses on both domains") {
    const Kappa k{3, 1.2, 1.8, 0.7};  // any positive rates
    std::mt19937_64 gen(22);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 s{log_uniform(gen, 0.05, 8), log_uniform(gen, 0.05, 8),
                     8 * u01(gen) - 4};  // z of either sign
        const Vec3 round = from_pqr(k, to_pqr(k, s));
        CHECK((round - s).norm() <= 1e-12 * (1 + s.norm()));
        const Vec3 u{6 * u01(gen) - 3, 6 * u01(gen) - 3, 6 * u01(gen) - 3};
        const Vec3 round2 = to_pqr(k, from_pqr(k, u));
        CHECK((round2 - u).norm() <= 1e-12 * (1 + u.norm()));
    }
}

TEST_CASE("transformed vector field") {
    const Kappa k{2, 1, 1, 1};
    CHECK(rhs_pqr(k, Vec3(Vec3::Zero())).isZero(1e-15));
    const Vec3 du = rhs_pqr(k, Vec3{1, 0, 0});
    CHECK(du[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(du[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(du[2] == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("pushforward identity via finite differences of the chart") {
    const Kappa k{2, 1, 1, 1};
    std::mt19937_64 gen(23);
    for (int i = 0; i < 100; ++i) {
        const Vec3 s{log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5)};
        Mat3 dpsi;
        for (int c = 0; c < 3; ++c) {
            const double h = 1e-6 * (1 + std::abs(s[c]));
            Vec3 sp = s, sm = s;
            sp[c] += h;
            sm[c] -= h;
            dpsi.col(c) = (to_pqr(k, sp) - to_pqr(k, sm)) / (2 * h);
        }
        const Vec3 lhs = dpsi * rhs_xyz(k, s);
        const Vec3 want = rhs_pqr(k, to_pqr(k, s));
        CHECK((lhs - want).norm() <= 1e-8 * (1 + want.norm()));
    }
}

TEST_CASE("V derivative along the flow vanishes in the center case") {
    const Kappa k = centered(Kappa{0, 1.3, 0.9, 1.7});
    std::mt19937_64 gen(24);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 s{log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5)};
        const double vdot = grad_V(k, s).dot(rhs_xyz(k, s));
        const double v = constant_of_motion(k, s);
        CHECK(std::abs(vdot) <= 1e-10 * (1 + std::abs(v)));
    }
}

TEST_CASE("hamiltonian basics and exact invariance along the planar field") {
    const Kappa k{2, 1, 1, 1};
    CHECK(hamiltonian(k, 0.0, 0.0) == 0.0);
    CHECK(hamiltonian(k, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    std::mt19937_64 gen(25);
    for (int i = 0; i < 500; ++i) {
        const double p = 6 * u01(gen) - 3, q = 6 * u01(gen) - 3;
        CHECK(hamiltonian(k, p, q) >= 0.0);
        // dH = (k2 p) pdot + 2 k4 (e^q - 1) qdot = 0 by the product structure
        const Vec2 du = rhs_planar(k, Vec2{p, q});
        const double hdot = k.k2 * p * du[0] + 2 * k.k4 * std::expm1(q) * du[1];
        CHECK(std::abs(hdot) <= 1e-14 * (1 + hamiltonian(k, p, q)));
    }
    CHECK(hamiltonian(k, 1e-9, 1e-9) > 0.0);
}

TEST_CASE("H composed with the chart differs from V by a constant") {
    const Kappa k{2, 1, 1, 1};
    std::mt19937_64 gen(26);
    const Vec3 s0{1, 1, 1};
    const Vec3 u0 = to_pqr(k, s0);
    const double offset = hamiltonian(k, u0[0], u0[1]) - constant_of_motion(k, s0);
    for (int i = 0; i < 300; ++i) {
        const Vec3 s{log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5)};
        const Vec3 u = to_pqr(k, s);
        const double diff = hamiltonian(k, u[0], u[1]) - constant_of_motion(k, s);
        CHECK(diff == doctest::Approx(offset).epsilon(1e-11));
    }
}

TEST_CASE("level sets of H(0, .)") {
    const Kappa k{2, 1, 1, 1};  // k2 = k4 = 1
    const LevelSet ls = level_set(k, 0.25);
    CHECK(ls.q_minus == doctest::Approx(-0.5453764666960421).epsilon(1e-12));
    CHECK(ls.q_plus == doctest::Approx(0.4615820454591966).epsilon(1e-12));
    CHECK(std::abs(hamiltonian(k, 0.0, ls.q_minus) - 0.25) <= 1e-12);
    CHECK(std::abs(hamiltonian(k, 0.0, ls.q_plus) - 0.25) <= 1e-12);
    CHECK(ls.q_minus < 0);
    CHECK(ls.q_plus > 0);

    // roots collapse to 0 with L
    for (double L : {1e-4, 1e-8}) {
        const LevelSet tiny = level_set(k, L);
        CHECK(std::abs(tiny.q_plus) <= 2 * std::sqrt(L / k.k4));
        CHECK(std::abs(tiny.q_minus) <= 2 * std::sqrt(L / k.k4));
        CHECK(std::abs(hamiltonian(k, 0.0, tiny.q_plus) - L) <= 1e-12);
    }
    // residual form of the definition
    const LevelSet big = level_set(k, 40.0);
    CHECK(std::expm1(big.q_plus) - big.q_plus == doctest::Approx(40.0 / (2 * k.k4)).epsilon(1e-12));

    CHECK_THROWS_AS(level_set(k, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(level_set(k, -1.0), std::invalid_argument);
}

TEST_CASE("stable manifold points") {
    const Kappa k{2, 1, 1, 1};
    CHECK(stable_manifold_point(k, 0.5).isApprox(Vec3{0.5, 2.0, 1.5}, 1e-14));
    CHECK(stable_manifold_point(k, 1.0).isApprox(Vec3{1, 1, 0}, 1e-14));
    for (double x : {0.05, 0.3, 0.8, 1.0}) {
        const Vec3 s = stable_manifold_point(k, x);
        CHECK(s[0] - s[1] + s[2] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(s[0] * s[1] == doctest::Approx(k.k4 / k.k2).epsilon(1e-14));
        const Vec3 u = to_pqr(k, s);
        CHECK(std::abs(u[0]) <= 1e-14);
        CHECK(std::abs(u[1]) <= 1e-14);
    }
    CHECK_THROWS_AS(stable_manifold_point(k, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stable_manifold_point(k, 1.01), std::invalid_argument);
    CHECK_THROWS_AS(stable_manifold_point(Kappa{2.5, 1, 1, 1}, 0.5), std::invalid_argument);
}

TEST_CASE("r-derivative bound of the third component (AM-GM)") {
    const Kappa k{2, 1, 1, 1};
    const double a = k.alpha();
    std::mt19937_64 gen(27);
    for (int i = 0; i < 500; ++i) {
        const double q = 8 * u01(gen) - 4, r = 8 * u01(gen) - 4;
        const double d3 = -a * (std::exp(-r) + std::exp(q + r));
        CHECK(d3 <= -2 * a * std::exp(q / 2) * (1 - 1e-14));
    }
}

TEST_CASE("center predicate and substitution") {
    CHECK(is_center(Kappa{2, 1, 1, 1}));
    CHECK_FALSE(is_center(Kappa{2.0000001, 1, 1, 1}));
    const Kappa sub = centered(Kappa{5, 1.1, 0.7, 1});
    CHECK(is_center(sub));
    CHECK_THROWS_AS(require_center(Kappa{1.9, 1, 1, 1}), std::invalid_argument);
}
