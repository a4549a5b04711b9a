#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdt/integrate.hpp"
#include "cdt/transform.hpp"

namespace cdt {

/// One level of the center-manifold construction: the section line at height
/// q carries a periodic planar orbit of period tau, and the spatial return
/// map R(q, .) contracts to the fixed point h.
struct PoincareRecord {
    double q = 0;                     // section coordinate, > 0
    double L = 0;                     // Hamiltonian level H(0, q)
    double tau = 0;                   // minimal period of the planar orbit
    double h = 0;                     // fixed point of R(q, .)
    double contraction_measured = 0;  // median successive-ratio estimate
    double contraction_bound = 0;     // e^{-K tau}, K = 2 alpha e^{q_minus/2}
};

/// Minimal period of the planar (p,q) orbit through (0, q): the time of the
/// first return to the section {p = 0, q > 0} with falling crossing.
double period(const Kappa& k, double q, const IntegratorConfig& cfg = {});

/// First-return map on the line {p = 0} x {q} x R, reusing one period
/// computation across evaluations.
class ReturnMap {
  public:
    ReturnMap(const Kappa& k, double q, const IntegratorConfig& cfg = {});
    double q() const { return q_; }
    double tau() const { return tau_; }
    /// r-coordinate of the flow of the (p,q,r) system from (0, q, r) after
    /// one period.
    double operator()(double r) const;

  private:
    Kappa k_;
    double q_;
    IntegratorConfig cfg_;
    double tau_;
};

/// Third coordinate of the flow from (0, q, r) after time tau_q.
double return_map(const Kappa& k, double q, double r, const IntegratorConfig& cfg = {});

/// The proof's contraction factor e^{-K tau_q} with K = 2 alpha e^{q_minus/2},
/// q_minus the negative solution of H(0, .) = H(0, q). Always in (0, 1).
double contraction_bound(const Kappa& k, double q, const IntegratorConfig& cfg = {});
double contraction_bound(const Kappa& k, double q, double tau);

/// Fixed point h(q) by direct iteration r <- R(q, r) from r = 0 until
/// |dr| <= 1e-12 (throws after 200 iterations).
PoincareRecord center_fixed_point(const Kappa& k, double q, const IntegratorConfig& cfg = {});

/// The center manifold sampled as one closed orbit per q-grid level, mapped
/// back to (x,y,z). Throws if any reconstructed point fails to be strictly
/// positive.
struct CenterManifoldMesh {
    std::vector<PoincareRecord> records;
    std::vector<std::vector<Vec3>> orbits;  // samples_per_orbit points per record
};

CenterManifoldMesh center_manifold_mesh(const Kappa& k, const std::vector<double>& q_grid,
                                        int samples_per_orbit = 256, const IntegratorConfig& cfg = {});

/// Log-spaced grid; the default mesh uses log_spaced(0.05, 4.0, 16).
std::vector<double> log_spaced(double lo, double hi, int n);

struct OmegaLimit {
    enum class Kind { Equilibrium, PeriodicOrbit };
    Kind kind;
    std::optional<PoincareRecord> record;  // present iff PeriodicOrbit
};

/// Classification of the forward limit set of a positive initial condition
/// in the center case: the equilibrium when H(Psi(state)) <= 1e-12, else the
/// periodic orbit of its level.
OmegaLimit omega_limit(const Kappa& k, const Vec3& state, const IntegratorConfig& cfg = {});

/// Post-hoc check that successive section returns approach the predicted
/// orbit: |r_n - h| strictly decreases until it reaches `floor`.
struct OmegaLimitValidation {
    bool ok = false;
    std::vector<double> distances;
};
OmegaLimitValidation validate_omega_limit(const Kappa& k, const Vec3& state, const PoincareRecord& rec,
                                          int max_returns = 20, double floor = 1e-8,
                                          const IntegratorConfig& cfg = {});

/// q-amplitudes at successive falling section crossings (p = 0, q > 0) of an
/// interior orbit of the original system, started at the section point
/// (0, q0, 0). Defined for any positive rate constants; the amplitude trend
/// is the bifurcation diagnostic (contracting, neutral, expanding).
std::vector<double> section_amplitudes(const Kappa& k, int returns, double q0 = 1.0,
                                       const IntegratorConfig& cfg = {});

std::string mesh_csv(const CenterManifoldMesh& mesh);
std::string orbit_csv(const PoincareRecord& rec, const std::vector<Vec3>& orbit);
/// Triangulated surface joining consecutive q-rings, OBJ format.
std::string mesh_obj(const CenterManifoldMesh& mesh);

}  // namespace cdt
