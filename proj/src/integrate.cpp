#include "cdt/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cdt {

namespace {

// Dormand-Prince 5(4) tableau with the standard quartic interpolant.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// b - b_hat: multiplies k1..k7 for the embedded error estimate.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;
// Interpolant: y(t0 + th*h) = y0 + h * K * P * [th, th^2, th^3, th^4].
constexpr double P_TABLE[7][4] = {
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0}};

double rms_scaled(const Eigen::VectorXd& e, const Eigen::VectorXd& scale) {
    double s = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double r = e[i] / scale[i];
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(e.size()));
}

double initial_step(const Rhs& rhs, double t0, const Eigen::VectorXd& y0, const Eigen::VectorXd& f0,
                    double rtol, double atol, long& evals) {
    const Eigen::VectorXd scale = (atol + rtol * y0.array().abs()).matrix();
    const double d0 = rms_scaled(y0, scale);
    const double d1 = rms_scaled(f0, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    Eigen::VectorXd y1 = y0 + h0 * f0;
    Eigen::VectorXd f1 = rhs(t0 + h0, y1);
    ++evals;
    const double d2 = rms_scaled(f1 - f0, scale) / h0;
    double h1;
    if (d1 <= 1e-15 && d2 <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min(100 * h0, h1);
}

}  // namespace

std::string to_string(IntegrationStatus s) {
    switch (s) {
        case IntegrationStatus::Completed: return "completed";
        case IntegrationStatus::StepUnderflow: return "step-underflow";
        case IntegrationStatus::PositivityGuard: return "positivity-guard";
        case IntegrationStatus::NonFinite: return "non-finite";
        case IntegrationStatus::StepLimit: return "step-limit";
    }
    return "?";
}

Eigen::VectorXd Trajectory::at(double t) const {
    const double span_tol = 1e-9 * (1.0 + std::abs(t1()));
    if (t < t0() - span_tol || t > t1() + span_tol)
        throw std::out_of_range("dense evaluation outside trajectory span");
    t = std::clamp(t, t0(), t1());
    // Find the segment containing t.
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t i = static_cast<size_t>(std::distance(times_.begin(), it));
    i = (i == 0) ? 0 : i - 1;
    if (i >= segments_.size()) i = segments_.size() - 1;
    const Segment& seg = segments_[i];
    const double th = (t - seg.t0) / seg.h;
    Eigen::Vector4d tp{th, th * th, th * th * th, th * th * th * th};
    return seg.y0 + seg.h * (seg.q * tp);
}

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                     const IntegratorConfig& cfg) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate requires t1 > t0");
    if (!(cfg.rtol > 0) || !(cfg.atol > 0)) throw std::invalid_argument("tolerances must be positive");
    const double t_end = std::min(t1, t0 + cfg.max_time);
    const auto n = y0.size();

    Trajectory traj;
    traj.times_.push_back(t0);
    traj.states_.push_back(y0);

    Eigen::VectorXd y = y0;
    double t = t0;
    Eigen::VectorXd f0 = rhs(t, y);
    ++traj.stats.rhs_evaluations;
    if (!f0.allFinite() || !y.allFinite()) {
        traj.status = IntegrationStatus::NonFinite;
        return traj;
    }

    double h = cfg.h_init > 0 ? cfg.h_init
                              : initial_step(rhs, t0, y, f0, cfg.rtol, cfg.atol, traj.stats.rhs_evaluations);
    h = std::min({h, cfg.max_step, t_end - t0});

    Eigen::Matrix<double, Eigen::Dynamic, 7> K(n, 7);
    bool previous_rejected = false;
    bool guard_rejected_last = false;

    while (t < t_end) {
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (h < h_min) {
            traj.status = guard_rejected_last ? IntegrationStatus::PositivityGuard
                                              : IntegrationStatus::StepUnderflow;
            return traj;
        }
        if (traj.stats.accepted + traj.stats.rejected >= cfg.max_steps) {
            traj.status = IntegrationStatus::StepLimit;
            return traj;
        }
        const bool final_step = t + h >= t_end;
        if (final_step) h = t_end - t;

        K.col(0) = f0;
        K.col(1) = rhs(t + C2 * h, y + h * (A21 * K.col(0)));
        K.col(2) = rhs(t + C3 * h, y + h * (A31 * K.col(0) + A32 * K.col(1)));
        K.col(3) = rhs(t + C4 * h, y + h * (A41 * K.col(0) + A42 * K.col(1) + A43 * K.col(2)));
        K.col(4) = rhs(t + C5 * h,
                       y + h * (A51 * K.col(0) + A52 * K.col(1) + A53 * K.col(2) + A54 * K.col(3)));
        K.col(5) = rhs(t + h, y + h * (A61 * K.col(0) + A62 * K.col(1) + A63 * K.col(2) +
                                       A64 * K.col(3) + A65 * K.col(4)));
        Eigen::VectorXd y_new =
            y + h * (B1 * K.col(0) + B3 * K.col(2) + B4 * K.col(3) + B5 * K.col(4) + B6 * K.col(5));
        K.col(6) = rhs(t + h, y_new);
        traj.stats.rhs_evaluations += 6;

        if (!y_new.allFinite() || !K.allFinite()) {
            ++traj.stats.rejected;
            h *= 0.5;
            previous_rejected = true;
            guard_rejected_last = false;
            if (h < h_min) {
                traj.status = IntegrationStatus::NonFinite;
                return traj;
            }
            continue;
        }

        if (cfg.positivity_guard && (y_new.array() < 0.0).any()) {
            ++traj.stats.rejected;
            h *= 0.5;
            previous_rejected = true;
            guard_rejected_last = true;
            continue;
        }

        const Eigen::VectorXd err =
            h * (E1 * K.col(0) + E3 * K.col(2) + E4 * K.col(3) + E5 * K.col(4) + E6 * K.col(5) +
                 E7 * K.col(6));
        const Eigen::VectorXd scale =
            (cfg.atol + cfg.rtol * y.array().abs().max(y_new.array().abs())).matrix();
        const double err_norm = rms_scaled(err, scale);

        if (err_norm <= 1.0) {
            Trajectory::Segment seg;
            seg.t0 = t;
            seg.h = h;
            seg.y0 = y;
            seg.q.resize(n, 4);
            for (int j = 0; j < 4; ++j) {
                seg.q.col(j).setZero();
                for (int i = 0; i < 7; ++i)
                    if (P_TABLE[i][j] != 0.0) seg.q.col(j) += P_TABLE[i][j] * K.col(i);
            }
            traj.segments_.push_back(std::move(seg));

            t = final_step ? t_end : t + h;
            y = y_new;
            f0 = K.col(6);  // FSAL
            traj.times_.push_back(t);
            traj.states_.push_back(y);
            ++traj.stats.accepted;

            double factor = (err_norm == 0.0) ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
            factor = std::clamp(factor, 0.2, 5.0);
            if (previous_rejected) factor = std::min(factor, 1.0);
            previous_rejected = false;
            guard_rejected_last = false;
            h = std::min(h * factor, cfg.max_step);
        } else {
            ++traj.stats.rejected;
            previous_rejected = true;
            guard_rejected_last = false;
            h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 0.9);
        }
    }
    traj.status = IntegrationStatus::Completed;
    return traj;
}

std::vector<EventHit> locate_event(const Trajectory& traj,
                                   const std::function<double(double, const Eigen::VectorXd&)>& g,
                                   EventDirection direction) {
    std::vector<EventHit> hits;
    const auto& ts = traj.times();
    auto value = [&](double t) { return g(t, traj.at(t)); };

    auto push_hit = [&](double t) {
        if (!hits.empty() && std::abs(hits.back().time - t) <= 1e-12 * (1.0 + std::abs(t))) return;
        hits.push_back({t, traj.at(t)});
    };

    auto refine = [&](double a, double b, double ga, double gb) {
        // Bisection to width 1e-14, then one secant polish.
        const double width = 1e-14 * std::max(1.0, std::abs(b));
        while (b - a > width) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double gm = value(m);
            if (gm == 0.0) return m;
            if ((gm > 0) == (ga > 0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
                gb = gm;
            }
        }
        if (gb != ga) {
            const double s = b - gb * (b - a) / (gb - ga);
            if (s > a && s < b) return s;
        }
        return 0.5 * (a + b);
    };

    auto want = [&](bool rising) {
        return direction == EventDirection::Any ||
               (direction == EventDirection::Rising && rising) ||
               (direction == EventDirection::Falling && !rising);
    };

    // A zero exactly at a sample point belongs to the bracket on its left; in
    // particular a start exactly on the zero set is not reported as an event.
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        // Endpoints plus midpoint to catch a double crossing within a step.
        const double pts[3] = {ts[i], 0.5 * (ts[i] + ts[i + 1]), ts[i + 1]};
        double vals[3];
        for (int j = 0; j < 3; ++j) vals[j] = value(pts[j]);
        for (int j = 0; j < 2; ++j) {
            const double ga = vals[j], gb = vals[j + 1];
            if (ga == 0.0) continue;
            if (gb == 0.0) {
                if (want(ga < 0)) push_hit(pts[j + 1]);
                continue;
            }
            if ((ga > 0) == (gb > 0)) continue;
            if (!want(ga < 0)) continue;
            push_hit(refine(pts[j], pts[j + 1], ga, gb));
        }
    }
    return hits;
}

double conserved_drift(const Trajectory& traj, const std::function<double(const Eigen::VectorXd&)>& fn) {
    const double v0 = fn(traj.front());
    double worst = 0.0;
    for (const auto& s : traj.states()) worst = std::max(worst, std::abs(fn(s) - v0));
    return worst / (1.0 + std::abs(v0));
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names,
                           int dense_samples) {
    std::string out = "t";
    for (const auto& n : names) out += "," + n;
    out += '\n';
    char buf[32];
    auto append_row = [&](double t, const Eigen::VectorXd& s) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        out += buf;
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", s[i]);
            out += buf;
        }
        out += '\n';
    };
    if (dense_samples >= 2) {
        const double t0 = traj.t0(), t1 = traj.t1();
        for (int i = 0; i < dense_samples; ++i) {
            const double t = t0 + (t1 - t0) * i / (dense_samples - 1);
            append_row(t, traj.at(t));
        }
    } else {
        for (size_t i = 0; i < traj.times().size(); ++i) append_row(traj.times()[i], traj.states()[i]);
    }
    return out;
}

}  // namespace cdt
