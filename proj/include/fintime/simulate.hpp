#pragma once

// Closed-loop integrator-chain and differentiator experiments built on the
// fixed-step engine, with online settling detection and early stop.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "fintime/laws.hpp"
#include "fintime/signal.hpp"
#include "fintime/sim.hpp"

namespace fintime {

/// Horizon long enough for every benchmark row of the given dimension.
inline double default_t_max(std::size_t n) { return n <= 3 ? 300.0 : 600.0; }

struct ClosedLoopRun {
    Trajectory trajectory;
    ConvergenceReport report;
};

/// Integrator chain dx_i = x_{i+1}, dx_n = u under the finite-time law, from
/// the all-coordinates-equal initial state (x0_scale, ..., x0_scale).
/// Settling is detected on the full integration grid (not the decimated
/// trajectory); integration stops once the dwell window completes.
inline ClosedLoopRun simulate_closed_loop(std::size_t n, double x0_scale, double gamma_seed,
                                          const GainScheme& scheme, const SimConfig& cfg,
                                          const ConvergenceCriterion& crit) {
    if (n < 1) throw ValidationError("simulate_closed_loop: n must be >= 1");
    const GainVector gains = binomial_gains(n, scheme.mu);
    const ExponentLadder ladder = exponent_ladder(n, gamma_seed);

    auto rhs = [&](double, const Vec& x, Vec& dx) {
        for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
        dx[n - 1] = bb_control(x, gains, ladder);
    };

    ClosedLoopRun run;
    ConvergenceTracker tracker(crit);
    bool done = false;
    detail::run_fixed_step(rhs, Vec(n, x0_scale), cfg,
                           [&](std::size_t step, double t, const Vec& x) {
                               if (step % cfg.record_stride == 0) {
                                   run.trajectory.times.push_back(t);
                                   run.trajectory.states.push_back(x);
                                   run.trajectory.inputs.push_back(bb_control(x, gains, ladder));
                               }
                               done = tracker.update(t, max_norm(x));
                               return !done;
                           });
    run.report = tracker.report();
    return run;
}

struct DifferentiatorRun {
    Trajectory trajectory;
    Vec tail_errors;  // per order i: sup over the trailing window of |z_{i+1} - y^(i)|
};

/// Sup of |z_{i+1}(t) - y^(i)(t)| over the trailing fraction of the recorded
/// trajectory, for each derivative order i = 0..m-1.
inline Vec derivative_tracking_errors(const Trajectory& traj, const Signal& signal,
                                      double tail_fraction = 0.2) {
    if (traj.size() == 0) throw ValidationError("derivative_tracking_errors: empty trajectory");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw ValidationError("derivative_tracking_errors: tail_fraction must be in (0, 1]");
    const std::size_t m = traj.states.front().size();
    const double t_end = traj.times.back();
    const double t_from = t_end * (1.0 - tail_fraction);
    Vec sup(m, 0.0);
    for (std::size_t r = 0; r < traj.size(); ++r) {
        if (traj.times[r] < t_from) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double err = std::abs(traj.states[r][i] - signal.derivative(i, traj.times[r]));
            sup[i] = std::max(sup[i], err);
        }
    }
    return sup;
}

/// Runs the differentiator over the signal and reports trailing-window
/// tracking errors against the analytic derivatives.
inline DifferentiatorRun simulate_differentiator(const Signal& signal, const Vec& z0,
                                                 const DifferentiatorConfig& dcfg,
                                                 const SimConfig& cfg,
                                                 double tail_fraction = 0.2) {
    if (z0.size() != dcfg.state_dim())
        throw ValidationError("simulate_differentiator: z0 length does not match the variant");
    auto rhs = [&](double t, const Vec& z, Vec& dz) {
        dz = differentiator_rhs(z, signal.value(t), dcfg);
    };
    DifferentiatorRun run;
    run.trajectory = integrate(rhs, z0, cfg);
    run.tail_errors = derivative_tracking_errors(run.trajectory, signal, tail_fraction);
    return run;
}

}  // namespace fintime
