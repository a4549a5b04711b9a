#include "cdt/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "cdt/analysis.hpp"
#include "cdt/boundary.hpp"
#include "cdt/integrate.hpp"
#include "cdt/network.hpp"
#include "cdt/poincare.hpp"
#include "cdt/transform.hpp"

namespace cdt {

namespace {

double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
double log_uniform(std::mt19937_64& g, double lo, double hi) {
    return lo * std::exp(u01(g) * std::log(hi / lo));
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, format);
    std::vsnprintf(buf, sizeof buf, format, ap);
    va_end(ap);
    return buf;
}

Rhs system_rhs(const MassActionSystem& sys) {
    return [sys](double, const Eigen::VectorXd& s) { return sys(s); };
}

CriterionResult criterion1() {
    CriterionResult r{1, "Routh-Hurwitz classification on random rate constants", false, ""};
    std::mt19937_64 gen(1001);
    int bad_class = 0, bad_eigen = 0;
    const double tol = 1e-9;
    for (int i = 0; i < 1000; ++i) {
        Kappa k{log_uniform(gen, 0.1, 10), log_uniform(gen, 0.1, 10), log_uniform(gen, 0.1, 10),
                log_uniform(gen, 0.1, 10)};
        const auto rep = classify_stability(k);
        const double disc = k.k1 - k.k2 - k.k3;
        const StabilityClass expected = std::abs(disc) <= 1e-12 ? StabilityClass::Center
                                        : disc > 0              ? StabilityClass::Stable
                                                                : StabilityClass::Unstable;
        if (rep.cls != expected) ++bad_class;
        double max_re = -1e300;
        for (const auto& ev : rep.eigenvalues) max_re = std::max(max_re, ev.real());
        if (rep.cls == StabilityClass::Stable && !(max_re < tol)) ++bad_eigen;
        if (rep.cls == StabilityClass::Unstable && !(max_re > -tol)) ++bad_eigen;
        // One eigenvalue is always real and negative (a0 > 0).
        bool has_real_negative = false;
        for (const auto& ev : rep.eigenvalues)
            if (std::abs(ev.imag()) <= tol * (1 + std::abs(ev.real())) && ev.real() < 0)
                has_real_negative = true;
        if (!has_real_negative) ++bad_eigen;
    }
    // Constructed center cases: imaginary pair of magnitude omega.
    int bad_center = 0;
    for (int i = 0; i < 50; ++i) {
        Kappa k{0, log_uniform(gen, 0.1, 10), log_uniform(gen, 0.1, 10), log_uniform(gen, 0.1, 10)};
        k.k1 = k.k2 + k.k3;
        const auto rep = classify_stability(k);
        if (rep.cls != StabilityClass::Center) ++bad_center;
        const auto& pair_hi = rep.eigenvalues[2];
        if (std::abs(pair_hi.real()) > tol || std::abs(pair_hi.imag() - k.omega()) > tol) ++bad_center;
    }
    r.pass = bad_class == 0 && bad_eigen == 0 && bad_center == 0;
    r.detail = fmt("1000 random + 50 center draws; class mismatches %d, eigenvalue sign violations %d, "
                   "center spectrum violations %d",
                   bad_class, bad_eigen, bad_center);
    return r;
}

CriterionResult criterion2() {
    CriterionResult r{2, "conservation of V over t in [0,100]", false, ""};
    const Kappa k{2, 1, 1, 1};
    const auto sys = MassActionSystem(builtin(Builtin::paper4), params_from(k));
    std::mt19937_64 gen(2002);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd s0(3);
        for (int c = 0; c < 3; ++c) s0[c] = log_uniform(gen, 0.3, 2.5);
        const auto traj = integrate(system_rhs(sys), s0, 0.0, 100.0, {});
        if (traj.status != IntegrationStatus::Completed) {
            r.detail = "integration failed: " + to_string(traj.status);
            return r;
        }
        const double drift = conserved_drift(
            traj, [&](const Eigen::VectorXd& s) { return constant_of_motion(k, Vec3(s[0], s[1], s[2])); });
        worst = std::max(worst, drift);
    }
    r.pass = worst <= 1e-6;
    r.detail = fmt("20 random positive starts, rtol 1e-10: max V drift %.3e (limit 1e-6)", worst);
    return r;
}

CriterionResult criterion3() {
    CriterionResult r{3, "comparison first integrals (Lotka, Ivanova, symmetric nine-reaction)", false, ""};
    double worst = 0;
    {
        const auto sys = MassActionSystem(builtin(Builtin::lotka),
                                          SystemParams({{"k1", 1.0}, {"k2", 1.0}, {"k3", 1.0}}));
        Eigen::VectorXd s0(2);
        s0 << 1.0, 2.0;
        const auto traj = integrate(system_rhs(sys), s0, 0.0, 100.0, {});
        worst = std::max(worst, conserved_drift(traj, [](const Eigen::VectorXd& s) {
                             return s[0] * s[1] * std::exp(-(s[0] + s[1]));
                         }));
    }
    {
        const auto sys = MassActionSystem(builtin(Builtin::ivanova),
                                          SystemParams({{"k1", 1.0}, {"k2", 1.0}, {"k3", 1.0}}));
        Eigen::VectorXd s0(3);
        s0 << 0.6, 1.2, 0.9;
        const auto traj = integrate(system_rhs(sys), s0, 0.0, 100.0, {});
        worst = std::max(worst, conserved_drift(traj, [](const Eigen::VectorXd& s) {
                             return s[0] * s[1] * s[2];
                         }));
    }
    {
        const auto sys = MassActionSystem(builtin(Builtin::symmetric9),
                                          SystemParams({{"alpha", 2.0}, {"beta", 1.0}, {"gamma", 1.0}}));
        Eigen::VectorXd s0(3);
        s0 << 0.5, 0.2, 0.3;
        const auto traj = integrate(system_rhs(sys), s0, 0.0, 100.0, {});
        worst = std::max(worst, conserved_drift(traj, [](const Eigen::VectorXd& s) {
                             const double sum = s[0] + s[1] + s[2];
                             return s[0] * s[1] * s[2] / (sum * sum * sum);
                         }));
    }
    r.pass = worst <= 1e-6;
    r.detail = fmt("max drift across the three integrals %.3e (limit 1e-6)", worst);
    return r;
}

CriterionResult criterion4() {
    CriterionResult r{4, "coordinate change: inverse identities and pushforward", false, ""};
    const Kappa k{2, 1, 1, 1};
    std::mt19937_64 gen(4004);
    double worst_inv = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 s{log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5), log_uniform(gen, 0.05, 5)};
        const Vec3 back = from_pqr(k, to_pqr(k, s));
        worst_inv = std::max(worst_inv, ((back - s).norm()) / (1.0 + s.norm()));
        const Vec3 u{4 * u01(gen) - 2, 4 * u01(gen) - 2, 4 * u01(gen) - 2};
        const Vec3 fwd = to_pqr(k, from_pqr(k, u));
        worst_inv = std::max(worst_inv, ((fwd - u).norm()) / (1.0 + u.norm()));
    }
    double worst_push = 0;
    for (int i = 0; i < 100; ++i) {
        const Vec3 s{log_uniform(gen, 0.1, 5), log_uniform(gen, 0.1, 5), log_uniform(gen, 0.05, 5)};
        // Finite-difference Jacobian of the coordinate change as the oracle.
        Eigen::MatrixXd dpsi = numerical_jacobian(
            [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return to_pqr(k, Vec3(v[0], v[1], v[2])); },
            Eigen::Vector3d(s));
        const Vec3 lhs = dpsi * rhs_xyz(k, s);
        const Vec3 rhs = rhs_pqr(k, to_pqr(k, s));
        worst_push = std::max(worst_push, (lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    r.pass = worst_inv <= 1e-12 && worst_push <= 1e-8;
    r.detail = fmt("identity error %.3e (limit 1e-12) at 1000 points; pushforward residual %.3e "
                   "(limit 1e-8) at 100 points",
                   worst_inv, worst_push);
    return r;
}

CriterionResult criterion5() {
    CriterionResult r{5, "return-map contraction against the proof bound", false, ""};
    const Kappa k{2, 1, 1, 1};
    bool ok = true;
    std::ostringstream detail;
    for (double q : {0.5, 1.0, 2.0}) {
        const ReturnMap R(k, q);
        const double measured = std::abs(R(1.0) - R(-1.0));
        const double bound = contraction_bound(k, q, R.tau()) * 2.0;
        ok = ok && measured <= bound + 1e-9;
        detail << fmt("q=%.1f |dR|=%.3e bound=%.3e; ", q, measured, bound);
    }
    r.pass = ok;
    r.detail = detail.str() + "(measured <= bound + 1e-9)";
    return r;
}

CriterionResult criterion6() {
    CriterionResult r{6, "center manifold mesh: fixed points, closure, yz bound, period limit", false, ""};
    const Kappa k{2, 1, 1, 1};
    const auto grid = log_spaced(0.05, 4.0, 16);
    const auto mesh = center_manifold_mesh(k, grid, 256);

    double worst_resid = 0, worst_closure = 0, worst_yz = -1e300;
    for (size_t i = 0; i < mesh.records.size(); ++i) {
        const auto& rec = mesh.records[i];
        const ReturnMap R(k, rec.q);
        worst_resid = std::max(worst_resid, std::abs(R(rec.h) - rec.h));
        Eigen::VectorXd u(3);
        u << 0.0, rec.q, rec.h;
        const auto traj = integrate(
            [&](double, const Eigen::VectorXd& w) -> Eigen::VectorXd {
                return rhs_pqr(k, Vec3(w[0], w[1], w[2]));
            },
            u, 0.0, rec.tau, {});
        const Vec3 start = from_pqr(k, Vec3(u[0], u[1], u[2]));
        const Vec3 end = from_pqr(k, Vec3(traj.back()[0], traj.back()[1], traj.back()[2]));
        worst_closure = std::max(worst_closure, (end - start).norm());
        for (const auto& p : mesh.orbits[i]) worst_yz = std::max(worst_yz, p[1] * p[2]);
    }
    const double yz_limit = 2 * k.k4 / k.k3;
    const double tau_small = period(k, 0.01);
    const double tau_lin = 2 * M_PI / k.omega();

    const bool ok = worst_resid <= 1e-10 && worst_closure <= 1e-6 && worst_yz <= yz_limit + 1e-8 &&
                    std::abs(tau_small - tau_lin) <= 1e-3;
    r.pass = ok;
    r.detail = fmt("16 levels: max fixed-point residual %.3e (1e-10), max orbit closure %.3e (1e-6), "
                   "max yz %.8f (<= %.3f + 1e-8), |tau(0.01) - 2pi/omega| = %.3e (1e-3)",
                   worst_resid, worst_closure, worst_yz, yz_limit, std::abs(tau_small - tau_lin));
    return r;
}

CriterionResult criterion7() {
    CriterionResult r{7, "vertical bifurcation evidence: section amplitude trends", false, ""};
    const int returns = 10;
    const auto a_stable = section_amplitudes(Kappa{2.1, 1, 1, 1}, returns);
    const auto a_center = section_amplitudes(Kappa{2.0, 1, 1, 1}, returns);
    const auto a_unstable = section_amplitudes(Kappa{1.9, 1, 1, 1}, returns);

    auto strictly = [&](const std::vector<double>& a, int sign) {
        if (static_cast<int>(a.size()) < returns + 1) return false;
        for (int i = 0; i < returns; ++i)
            if (!(sign * (a[i + 1] - a[i]) > 0)) return false;
        return true;
    };
    double center_dev = 0;
    for (size_t i = 1; i < a_center.size(); ++i)
        center_dev = std::max(center_dev, std::abs(a_center[i] - a_center[0]));

    const bool ok = strictly(a_stable, -1) && strictly(a_unstable, +1) &&
                    a_center.size() >= static_cast<size_t>(returns + 1) && center_dev <= 1e-6;
    r.pass = ok;
    r.detail = fmt("k1=2.1 decreasing %s, k1=1.9 increasing %s, k1=2 amplitude deviation %.3e (1e-6) "
                   "over %d returns",
                   strictly(a_stable, -1) ? "yes" : "NO", strictly(a_unstable, +1) ? "yes" : "NO",
                   center_dev, returns);
    return r;
}

CriterionResult criterion8() {
    CriterionResult r{8, "boundary dynamics: exact facet family and limit curve", false, ""};
    const Kappa k{2, 1, 1, 1};

    // (a) closed-form solutions satisfy the facet equations (5-point stencil).
    double worst_resid = 0;
    for (double C : {-0.3, 0.0, 1.0}) {
        const auto sol = FacetSolution::with_c(C);
        double lo = -5.0;
        if (sol.domain_start()) lo = std::max(lo, *sol.domain_start() + 0.5);
        const double hh = 1e-3;
        for (int i = 0; i <= 100; ++i) {
            const double tau = lo + (5.0 - lo) * i / 100.0;
            const Vec2 m1 = sol(tau - hh), p1 = sol(tau + hh), m2 = sol(tau - 2 * hh), p2 = sol(tau + 2 * hh);
            const Vec2 deriv = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * hh);
            const Vec2 yz = sol(tau);
            worst_resid = std::max(worst_resid, (deriv - facet_rhs(yz[0], yz[1])).cwiseAbs().maxCoeff());
        }
    }

    // (b) blow-up time of the C = -1/2 member is exactly 0.
    const double t0_err = std::abs(blowup_time(-0.5));

    // (c) curve value at tau = 0.
    const double scale = std::sqrt(2 * k.k4 / k.k3);
    const Vec3 expect{0.0, scale * 2 * normal_pdf(0), scale * 2 * normal_pdf(0)};
    const double curve0_err = (boundary_curve(k, 0.0) - expect).cwiseAbs().maxCoeff();

    // (d) yz -> 2 k4/k3 along the curve; checked at tau = -8.
    const Vec3 tail = boundary_curve(k, -8.0);
    const double yz_dev = std::abs(tail[1] * tail[2] - 2 * k.k4 / k.k3);

    const bool ok = worst_resid <= 1e-8 && t0_err <= 1e-12 && curve0_err <= 1e-12 && yz_dev <= 1e-2;
    r.pass = ok;
    r.detail = fmt("facet residual %.3e (1e-8); blowup_time(-0.5) error %.3e (1e-12); curve(0) error "
                   "%.3e (1e-12); |yz(-8) - 2k4/k3| = %.6e (1e-2)",
                   worst_resid, t0_err, curve0_err, yz_dev);
    return r;
}

CriterionResult criterion9() {
    CriterionResult r{9, "omega-limit classification with post-hoc orbit convergence", false, ""};
    const Kappa k{2, 1, 1, 1};
    std::mt19937_64 gen(9009);
    int bad = 0;
    double worst_first_gap = 0;
    for (int i = 0; i < 20; ++i) {
        const Vec3 s{log_uniform(gen, 0.3, 2.5), log_uniform(gen, 0.3, 2.5), log_uniform(gen, 0.3, 2.5)};
        const auto lim = omega_limit(k, s);
        if (lim.kind != OmegaLimit::Kind::PeriodicOrbit) {
            ++bad;
            continue;
        }
        const auto val = validate_omega_limit(k, s, *lim.record);
        if (!val.ok) ++bad;
        if (val.distances.size() >= 2) worst_first_gap = std::max(worst_first_gap, val.distances.back());
    }
    int bad_manifold = 0;
    for (double x : {0.2, 0.6, 0.95 * std::sqrt(k.k4 / k.k2)}) {
        const auto lim = omega_limit(k, stable_manifold_point(k, x));
        if (lim.kind != OmegaLimit::Kind::Equilibrium) ++bad_manifold;
    }
    r.pass = bad == 0 && bad_manifold == 0;
    r.detail = fmt("20 random starts: %d failures (final section distance <= %.1e); 3 stable-manifold "
                   "starts: %d misclassified",
                   bad, worst_first_gap, bad_manifold);
    return r;
}

ReactionNetwork fuzz_network(std::mt19937_64& gen) {
    const char* pool[] = {"A", "B", "C", "D", "E"};
    const int nspecies = 1 + static_cast<int>(u01(gen) * 5);
    const int nreactions = 1 + static_cast<int>(u01(gen) * 7);
    auto random_complex = [&](bool allow_empty) {
        Complex c;
        const int terms = static_cast<int>(u01(gen) * 3) + (allow_empty ? 0 : 1);
        for (int t = 0; t < terms; ++t) {
            const char* sp = pool[static_cast<int>(u01(gen) * nspecies)];
            c[sp] += 1 + static_cast<int>(u01(gen) * 3);
        }
        return c;
    };
    std::vector<Reaction> rs;
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto note = [&](const Complex& c) {
        for (const auto& [sp, n] : c)
            if (seen.insert(sp).second) order.push_back(sp);
    };
    for (int i = 0; i < nreactions; ++i) {
        Reaction rx;
        rx.rate_symbol = "r" + std::to_string(i);
        do {
            rx.reactant = random_complex(true);
            rx.product = random_complex(rx.reactant.empty() ? false : true);
        } while (rx.reactant == rx.product);
        note(rx.reactant);
        note(rx.product);
        rs.push_back(std::move(rx));
    }
    return ReactionNetwork(order, rs);
}

CriterionResult criterion10(const VerifyOptions& opt) {
    CriterionResult r{10, "determinism and parser round-trip", false, ""};
    int bad_roundtrip = 0;
    for (const auto& name : builtin_names()) {
        const auto net = builtin(name);
        if (parse_network(pretty_print(net)) != net) ++bad_roundtrip;
    }
    std::mt19937_64 gen(10010);
    for (int i = 0; i < 200; ++i) {
        const auto net = fuzz_network(gen);
        if (parse_network(pretty_print(net)) != net) ++bad_roundtrip;
    }

    // Library-level determinism: regenerate two artifacts and compare bytes.
    bool deterministic = true;
    {
        const Kappa k{2, 1, 1, 1};
        const auto grid = log_spaced(0.1, 1.0, 4);
        const auto a = mesh_csv(center_manifold_mesh(k, grid, 64));
        const auto b = mesh_csv(center_manifold_mesh(k, grid, 64));
        deterministic = deterministic && a == b;
        const auto sys = MassActionSystem(builtin(Builtin::paper4), params_from(k));
        const auto mk = [&] {
            Eigen::VectorXd s0(3);
            s0 << 1, 1, 1;
            return trajectory_csv(integrate(system_rhs(sys), s0, 0.0, 10.0, {}), {"x", "y", "z"});
        };
        deterministic = deterministic && mk() == mk();
    }

    std::string cli_note = "cli not checked";
    bool cli_ok = true;
    if (!opt.cli_path.empty()) {
        auto run_twice = [&](const std::string& args) {
            const std::string base = "/tmp/cdt_det_" + std::to_string(::getpid());
            const std::string f1 = base + "_1.out", f2 = base + "_2.out";
            std::string cmd1 = opt.cli_path + " " + args + " > " + f1 + " 2>/dev/null";
            std::string cmd2 = opt.cli_path + " " + args + " > " + f2 + " 2>/dev/null";
            if (std::system(cmd1.c_str()) != 0 || std::system(cmd2.c_str()) != 0) return false;
            std::ifstream a(f1), b(f2);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            std::remove(f1.c_str());
            std::remove(f2.c_str());
            return sa.str() == sb.str() && !sa.str().empty();
        };
        cli_ok = run_twice("classify --kappa 2,1,1,1") &&
                 run_twice("scan --kappa 2,1,1,1 --k1-min 1.9 --k1-max 2.1 --k1-step 0.1 --returns 4") &&
                 run_twice("simulate --network builtin:paper4 --kappa 2,1,1,1 --y0 1,1,1 --tmax 5 --seed 7");
        cli_note = cli_ok ? "cli byte-identical" : "cli outputs differ";
    }

    r.pass = bad_roundtrip == 0 && deterministic && cli_ok;
    r.detail = fmt("round-trip failures %d/205; library outputs %s; %s", bad_roundtrip,
                   deterministic ? "byte-identical" : "DIFFER", cli_note.c_str());
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt) {
    std::vector<CriterionResult> results;
    results.push_back(criterion1());
    results.push_back(criterion2());
    results.push_back(criterion3());
    results.push_back(criterion4());
    results.push_back(criterion5());
    results.push_back(criterion6());
    results.push_back(criterion7());
    results.push_back(criterion8());
    results.push_back(criterion9());
    results.push_back(criterion10(opt));
    return results;
}

}  // namespace cdt
