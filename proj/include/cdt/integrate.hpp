#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace cdt {

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double max_time = 1e4;  // hard cap on the integration span
    double h_init = 0.0;    // 0 = choose automatically
    bool positivity_guard = false;  // reject steps whose end state leaves the nonnegative orthant
    long max_steps = 20'000'000;
};

enum class IntegrationStatus {
    Completed,
    StepUnderflow,    // step size shrank below floating-point resolution (e.g. finite-time blow-up)
    PositivityGuard,  // guard kept rejecting until the step underflowed
    NonFinite,        // right-hand side or state stopped being finite
    StepLimit,
};

std::string to_string(IntegrationStatus s);

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

struct Event {
    double time;
    std::string label;
};

/// Result of an adaptive embedded Runge-Kutta 5(4) run: accepted states, a
/// piecewise-quartic dense interpolant, and run statistics. Immutable after
/// construction; safe to share across threads.
class Trajectory {
  public:
    const std::vector<double>& times() const { return times_; }
    const std::vector<Eigen::VectorXd>& states() const { return states_; }
    double t0() const { return times_.front(); }
    double t1() const { return times_.back(); }
    const Eigen::VectorXd& front() const { return states_.front(); }
    const Eigen::VectorXd& back() const { return states_.back(); }

    /// Dense evaluation anywhere in [t0, t1] (inputs within 1e-9 of the span
    /// are clamped; anything farther throws).
    Eigen::VectorXd at(double t) const;

    IntegrationStatus status = IntegrationStatus::Completed;
    IntegrationStats stats;
    std::vector<Event> events;

  private:
    friend Trajectory integrate(const Rhs&, const Eigen::VectorXd&, double, double,
                                const IntegratorConfig&);
    struct Segment {
        double t0, h;
        Eigen::VectorXd y0;
        Eigen::Matrix<double, Eigen::Dynamic, 4> q;  // dense coefficients
    };
    std::vector<double> times_;
    std::vector<Eigen::VectorXd> states_;
    std::vector<Segment> segments_;
};

/// Integrate y' = rhs(t, y) over [t0, t1], t1 > t0, with the Dormand-Prince
/// 5(4) pair and a free 4th-order interpolant. Error per step is controlled
/// to atol + rtol * |y| in the RMS norm.
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                     const IntegratorConfig& cfg = {});

enum class EventDirection { Rising, Falling, Any };

struct EventHit {
    double time;
    Eigen::VectorXd state;
};

/// Zeros of g(t, y(t)) along the trajectory, refined on the dense output by
/// bisection (bracket width 1e-14 * max(1, |t|)) plus one secant polish.
/// Rising means g goes from negative to positive.
std::vector<EventHit> locate_event(const Trajectory& traj,
                                   const std::function<double(double, const Eigen::VectorXd&)>& g,
                                   EventDirection direction = EventDirection::Any);

/// max over accepted states of |fn(y) - fn(y0)| / (1 + |fn(y0)|).
double conserved_drift(const Trajectory& traj,
                       const std::function<double(const Eigen::VectorXd&)>& fn);

/// CSV dump: header "t,<names...>", one row per accepted step, or
/// dense_samples >= 2 equispaced rows resampled from the interpolant.
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names,
                           int dense_samples = 0);

}  // namespace cdt
