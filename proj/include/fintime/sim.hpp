#pragma once

// Deterministic fixed-step integration of (possibly nonsmooth) dynamics,
// with settling-time detection on uniform grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fintime/errors.hpp"
#include "fintime/linalg.hpp"

namespace fintime {

enum class Method { euler, rk4 };

inline std::string to_string(Method m) { return m == Method::euler ? "euler" : "rk4"; }

struct SimConfig {
    double step_h = 1e-4;
    Method method = Method::rk4;
    double t_max = 300.0;
    std::size_t record_stride = 1;  // trajectory decimation

    void validate() const {
        if (!(step_h > 0.0) || !std::isfinite(step_h))
            throw ValidationError("SimConfig: step_h must be positive");
        if (!(t_max >= step_h) || !std::isfinite(t_max))
            throw ValidationError("SimConfig: t_max must be >= step_h");
        if (record_stride < 1) throw ValidationError("SimConfig: record_stride must be >= 1");
    }
};

/// Sampled state history on the uniform grid step_h * record_stride.
struct Trajectory {
    Vec times;
    std::vector<Vec> states;
    Vec inputs;  // per-sample control value; empty when not applicable

    bool has_inputs() const { return !inputs.empty(); }
    std::size_t size() const { return times.size(); }
};

struct ConvergenceCriterion {
    double epsilon = 1e-6;  // state max-norm threshold
    double dwell = 1.0;     // seconds the norm must stay below epsilon

    void validate() const {
        if (!(epsilon > 0.0)) throw ValidationError("ConvergenceCriterion: epsilon must be > 0");
        if (!(dwell >= 0.0)) throw ValidationError("ConvergenceCriterion: dwell must be >= 0");
    }
};

struct ConvergenceReport {
    bool converged = false;
    double t_conv = 0.0;     // first instant after which the norm stays below epsilon
    double final_norm = 0.0; // state max-norm at the last processed sample
};

inline double max_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

/// Incremental settling detector shared by the online (integration grid) and
/// offline (recorded grid) paths so both apply identical semantics.
class ConvergenceTracker {
public:
    explicit ConvergenceTracker(ConvergenceCriterion crit) : crit_(crit) { crit_.validate(); }

    /// Feeds one grid sample; returns true once the dwell window is complete.
    bool update(double t, double norm) {
        last_norm_ = norm;
        if (norm <= crit_.epsilon) {
            if (!below_) {
                below_ = true;
                candidate_ = t;
            }
            if (t - candidate_ >= crit_.dwell) done_ = true;
        } else {
            below_ = false;
        }
        return done_;
    }

    ConvergenceReport report() const {
        ConvergenceReport r;
        r.converged = done_;
        r.t_conv = done_ ? candidate_ : 0.0;
        r.final_norm = last_norm_;
        return r;
    }

private:
    ConvergenceCriterion crit_;
    bool below_ = false;
    bool done_ = false;
    double candidate_ = 0.0;
    double last_norm_ = 0.0;
};

/// Earliest grid time t* whose max-norm stays <= epsilon on [t*, t*+dwell];
/// not converged when no such window fits before the trajectory end.
inline ConvergenceReport detect_convergence(const Trajectory& traj,
                                            const ConvergenceCriterion& crit) {
    if (traj.size() == 0) throw ValidationError("detect_convergence: empty trajectory");
    ConvergenceTracker tracker(crit);
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (tracker.update(traj.times[i], max_norm(traj.states[i]))) break;
    return tracker.report();
}

namespace detail {

template <class Rhs>
inline void rk4_step(Rhs&& rhs, double t, double h, const Vec& x, Vec& out, Vec& k1, Vec& k2,
                     Vec& k3, Vec& k4, Vec& tmp) {
    const std::size_t n = x.size();
    rhs(t, x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

/// Fixed-step driver. rhs(t, x, dx); on_sample(step, t, x) at every grid
/// point (step 0 included) and may return false to stop early.
template <class Rhs, class OnSample>
void run_fixed_step(Rhs&& rhs, Vec x0, const SimConfig& cfg, OnSample&& on_sample) {
    cfg.validate();
    if (!all_finite(x0)) throw ValidationError("integrate: non-finite initial state");
    const std::size_t n = x0.size();
    if (n == 0) throw ValidationError("integrate: empty initial state");
    const double h = cfg.step_h;
    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_max / h));
    Vec x = std::move(x0), next(n), k1(n), k2(n), k3(n), k4(n), tmp(n);

    if (!on_sample(std::size_t{0}, 0.0, x)) return;
    for (std::size_t step = 1; step <= steps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * h;
        if (cfg.method == Method::rk4) {
            rk4_step(rhs, t_prev, h, x, next, k1, k2, k3, k4, tmp);
        } else {
            rhs(t_prev, x, k1);
            for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + h * k1[i];
        }
        const double t = static_cast<double>(step) * h;
        if (!all_finite(next))
            throw BlowUpError("integration blew up (non-finite state) at t = " + std::to_string(t),
                              t);
        x.swap(next);
        if (!on_sample(step, t, x)) return;
    }
}

}  // namespace detail

/// Integrates dx = rhs(t, x) on the uniform grid of cfg; the trajectory keeps
/// every record_stride-th sample. Identical inputs produce bit-identical
/// output.
template <class Rhs>
Trajectory integrate(Rhs&& rhs, const Vec& x0, const SimConfig& cfg) {
    Trajectory traj;
    detail::run_fixed_step(rhs, x0, cfg, [&](std::size_t step, double t, const Vec& x) {
        if (step % cfg.record_stride == 0) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
        return true;
    });
    return traj;
}

inline void format_full(char* buf, std::size_t cap, double v) { std::snprintf(buf, cap, "%.17g", v); }

/// CSV with header t,<prefix>1,...,<prefix>n[,u]; 17 significant digits.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const std::string& state_prefix = "x") {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << "," << state_prefix << i;
    if (traj.has_inputs()) os << ",u";
    os << "\n";
    char buf[64];
    for (std::size_t r = 0; r < traj.size(); ++r) {
        format_full(buf, sizeof buf, traj.times[r]);
        os << buf;
        for (double v : traj.states[r]) {
            format_full(buf, sizeof buf, v);
            os << "," << buf;
        }
        if (traj.has_inputs()) {
            format_full(buf, sizeof buf, traj.inputs[r]);
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace fintime
