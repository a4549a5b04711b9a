#include "cdt/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cdt/parallel.hpp"

namespace cdt {

namespace {

Rhs planar_rhs(const Kappa& k) {
    return [k](double, const Eigen::VectorXd& u) -> Eigen::VectorXd {
        Vec2 du = rhs_planar(k, Vec2(u[0], u[1]));
        return Eigen::Vector2d(du[0], du[1]);
    };
}

Rhs spatial_rhs(const Kappa& k) {
    return [k](double, const Eigen::VectorXd& u) -> Eigen::VectorXd {
        Vec3 du = rhs_pqr(k, Vec3(u[0], u[1], u[2]));
        return Eigen::Vector3d(du[0], du[1], du[2]);
    };
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

char* fmt(char* buf, size_t n, double v) {
    std::snprintf(buf, n, "%.17g", v);
    return buf;
}

}  // namespace

double period(const Kappa& k, double q, const IntegratorConfig& cfg_in) {
    require_center(k);
    if (!(q > 0)) throw std::invalid_argument("period requires q > 0");
    // The returned time anchors every return-map evaluation, so resolve it two
    // orders tighter than the requested flow accuracy (|p(tau)| stays below
    // 1e-10 at the default tolerances).
    IntegratorConfig cfg = cfg_in;
    cfg.rtol = std::max(cfg_in.rtol * 1e-2, 1e-13);
    cfg.atol = std::max(cfg_in.atol * 1e-2, 1e-15);
    const Rhs rhs = planar_rhs(k);
    const double chunk = 8.0 * M_PI / k.omega();  // two linearized periods per chunk
    const auto section = [](double, const Eigen::VectorXd& u) { return u[0]; };

    Eigen::VectorXd u(2);
    u << 0.0, q;
    double t = 0.0;
    while (t < cfg.max_time) {
        Trajectory traj = integrate(rhs, u, t, t + chunk, cfg);
        const auto hits = locate_event(traj, section, EventDirection::Falling);
        if (!hits.empty()) return hits.front().time;
        if (traj.status != IntegrationStatus::Completed)
            throw std::runtime_error("period: integration failed (" + to_string(traj.status) + ")");
        u = traj.back();
        t = traj.t1();
    }
    throw std::runtime_error("period: no section return within max_time");
}

ReturnMap::ReturnMap(const Kappa& k, double q, const IntegratorConfig& cfg)
  : k_(k), q_(q), cfg_(cfg), tau_(period(k, q, cfg)) {}

double ReturnMap::operator()(double r) const {
    Eigen::VectorXd u(3);
    u << 0.0, q_, r;
    Trajectory traj = integrate(spatial_rhs(k_), u, 0.0, tau_, cfg_);
    if (traj.status != IntegrationStatus::Completed)
        throw std::runtime_error("return_map: integration failed (" + to_string(traj.status) + ")");
    return traj.back()[2];
}

double return_map(const Kappa& k, double q, double r, const IntegratorConfig& cfg) {
    return ReturnMap(k, q, cfg)(r);
}

double contraction_bound(const Kappa& k, double q, double tau) {
    const double L = hamiltonian(k, 0.0, q);
    const LevelSet ls = level_set(k, L);
    const double K = 2.0 * k.alpha() * std::exp(0.5 * ls.q_minus);
    return std::exp(-K * tau);
}

double contraction_bound(const Kappa& k, double q, const IntegratorConfig& cfg) {
    return contraction_bound(k, q, period(k, q, cfg));
}

PoincareRecord center_fixed_point(const Kappa& k, double q, const IntegratorConfig& cfg) {
    const ReturnMap R(k, q, cfg);
    double r = 0.0;
    std::vector<double> deltas;
    bool converged = false;
    for (int i = 0; i < 200; ++i) {
        const double rn = R(r);
        const double d = std::abs(rn - r);
        deltas.push_back(d);
        r = rn;
        if (d <= 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error(
            "center_fixed_point: no convergence in 200 iterations (integration tolerance too loose)");

    std::vector<double> ratios;
    for (size_t i = 0; i + 1 < deltas.size(); ++i)
        if (deltas[i] > 0.0) ratios.push_back(deltas[i + 1] / deltas[i]);

    PoincareRecord rec;
    rec.q = q;
    rec.L = hamiltonian(k, 0.0, q);
    rec.tau = R.tau();
    rec.h = r;
    rec.contraction_measured = median(std::move(ratios));
    rec.contraction_bound = contraction_bound(k, q, rec.tau);
    return rec;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_spaced: bad grid request");
    std::vector<double> g(n);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * i / (n - 1));
    return g;
}

CenterManifoldMesh center_manifold_mesh(const Kappa& k, const std::vector<double>& q_grid,
                                        int samples_per_orbit, const IntegratorConfig& cfg) {
    require_center(k);
    if (samples_per_orbit < 8) throw std::invalid_argument("samples_per_orbit too small");

    struct Level {
        PoincareRecord rec;
        std::vector<Vec3> orbit;
    };
    auto levels = parallel_map(q_grid.size(), [&](size_t i) {
        const double q = q_grid[i];
        Level lv;
        lv.rec = center_fixed_point(k, q, cfg);
        Eigen::VectorXd u(3);
        u << 0.0, q, lv.rec.h;
        Trajectory traj = integrate(spatial_rhs(k), u, 0.0, lv.rec.tau, cfg);
        if (traj.status != IntegrationStatus::Completed)
            throw std::runtime_error("mesh orbit integration failed at q = " + std::to_string(q));
        lv.orbit.reserve(samples_per_orbit);
        for (int j = 0; j < samples_per_orbit; ++j) {
            const double t = lv.rec.tau * j / samples_per_orbit;
            const Eigen::VectorXd w = traj.at(t);
            const Vec3 s = from_pqr(k, Vec3(w[0], w[1], w[2]));
            if (!(s[0] > 0 && s[1] > 0 && s[2] > 0))
                throw std::runtime_error("mesh point left the positive orthant at q = " + std::to_string(q));
            lv.orbit.push_back(s);
        }
        return lv;
    });

    CenterManifoldMesh mesh;
    for (auto& lv : levels) {
        mesh.records.push_back(lv.rec);
        mesh.orbits.push_back(std::move(lv.orbit));
    }
    return mesh;
}

OmegaLimit omega_limit(const Kappa& k, const Vec3& state, const IntegratorConfig& cfg) {
    require_center(k);
    if (!(state[0] > 0 && state[1] > 0 && state[2] > 0))
        throw std::invalid_argument("omega_limit requires a positive initial condition");
    const Vec3 u = to_pqr(k, state);
    const double L = hamiltonian(k, u[0], u[1]);
    if (L <= 1e-12) return {OmegaLimit::Kind::Equilibrium, std::nullopt};
    const double q = level_set(k, L).q_plus;
    return {OmegaLimit::Kind::PeriodicOrbit, center_fixed_point(k, q, cfg)};
}

OmegaLimitValidation validate_omega_limit(const Kappa& k, const Vec3& state, const PoincareRecord& rec,
                                          int max_returns, double floor, const IntegratorConfig& cfg) {
    OmegaLimitValidation v;
    const Vec3 u0 = to_pqr(k, state);
    Eigen::VectorXd u(3);
    u << u0[0], u0[1], u0[2];
    Trajectory traj = integrate(spatial_rhs(k), u, 0.0, (max_returns + 0.6) * rec.tau, cfg);
    const auto hits = locate_event(
        traj, [](double, const Eigen::VectorXd& w) { return w[0]; }, EventDirection::Falling);
    for (const auto& hit : hits) {
        if (hit.state[1] <= 0) continue;  // the q < 0 half of the section plane
        v.distances.push_back(std::abs(hit.state[2] - rec.h));
    }
    if (v.distances.size() < 2) return v;
    v.ok = true;
    for (size_t i = 0; i + 1 < v.distances.size(); ++i) {
        if (v.distances[i] <= floor) break;
        if (!(v.distances[i + 1] < v.distances[i])) {
            v.ok = false;
            break;
        }
    }
    return v;
}

std::vector<double> section_amplitudes(const Kappa& k, int returns, double q0,
                                       const IntegratorConfig& cfg) {
    require_positive(k);
    const Vec3 s0 = from_pqr(k, Vec3(0.0, q0, 0.0));
    Eigen::VectorXd s(3);
    s << s0[0], s0[1], s0[2];
    std::vector<double> amps{q0};
    const auto rhs = [k](double, const Eigen::VectorXd& w) -> Eigen::VectorXd {
        return rhs_xyz(k, Vec3(w[0], w[1], w[2]));
    };
    const auto section = [](double, const Eigen::VectorXd& w) { return w[0] - w[1] + w[2]; };
    double t = 0.0;
    const double chunk = 16.0 * M_PI / k.omega();
    while (static_cast<int>(amps.size()) < returns + 1 && t < cfg.max_time) {
        const Trajectory traj = integrate(rhs, s, t, t + chunk, cfg);
        for (const auto& hit : locate_event(traj, section, EventDirection::Falling)) {
            const double q = std::log(hit.state[0] * hit.state[1] * k.k2 / k.k4);
            if (q > 0) amps.push_back(q);
            if (static_cast<int>(amps.size()) >= returns + 1) break;
        }
        if (traj.status != IntegrationStatus::Completed)
            throw std::runtime_error("section_amplitudes: integration failed (" + to_string(traj.status) +
                                     ")");
        s = traj.back();
        t = traj.t1();
    }
    return amps;
}

std::string mesh_csv(const CenterManifoldMesh& mesh) {
    std::string out = "q,tau,h,contraction_measured,contraction_bound\n";
    char b[32];
    for (const auto& r : mesh.records) {
        out += fmt(b, sizeof b, r.q);
        out += ',';
        out += fmt(b, sizeof b, r.tau);
        out += ',';
        out += fmt(b, sizeof b, r.h);
        out += ',';
        out += fmt(b, sizeof b, r.contraction_measured);
        out += ',';
        out += fmt(b, sizeof b, r.contraction_bound);
        out += '\n';
    }
    return out;
}

std::string orbit_csv(const PoincareRecord& rec, const std::vector<Vec3>& orbit) {
    std::string out = "t,x,y,z\n";
    char b[32];
    const size_t n = orbit.size();
    for (size_t j = 0; j < n; ++j) {
        out += fmt(b, sizeof b, rec.tau * static_cast<double>(j) / static_cast<double>(n));
        for (int c = 0; c < 3; ++c) {
            out += ',';
            out += fmt(b, sizeof b, orbit[j][c]);
        }
        out += '\n';
    }
    return out;
}

std::string mesh_obj(const CenterManifoldMesh& mesh) {
    std::string out = "# center manifold surface: one ring of vertices per q level\n";
    char line[128];
    const size_t rings = mesh.orbits.size();
    if (rings == 0) return out;
    const size_t s = mesh.orbits.front().size();
    for (const auto& orbit : mesh.orbits) {
        for (const auto& p : orbit) {
            std::snprintf(line, sizeof line, "v %.9g %.9g %.9g\n", p[0], p[1], p[2]);
            out += line;
        }
    }
    auto vid = [s](size_t ring, size_t j) { return static_cast<long>(ring * s + (j % s)) + 1; };
    for (size_t ring = 0; ring + 1 < rings; ++ring) {
        for (size_t j = 0; j < s; ++j) {
            std::snprintf(line, sizeof line, "f %ld %ld %ld\n", vid(ring, j), vid(ring, j + 1),
                          vid(ring + 1, j + 1));
            out += line;
            std::snprintf(line, sizeof line, "f %ld %ld %ld\n", vid(ring, j), vid(ring + 1, j + 1),
                          vid(ring + 1, j));
            out += line;
        }
    }
    return out;
}

}  // namespace cdt
