#pragma once

// End-to-end reproduction of the reference convergence-time grid and the
// scalar margin checks. Rows are independent and may run on several worker
// threads; results are assembled in grid order, so the emitted documents do
// not depend on the job count.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include "fintime/estimate.hpp"
#include "fintime/laws.hpp"
#include "fintime/reference_table.hpp"
#include "fintime/report.hpp"
#include "fintime/simulate.hpp"

namespace fintime {

struct BenchOptions {
    double step_h = 1e-4;
    Method method = Method::rk4;
    ConvergenceCriterion criterion{};  // eps 1e-6, dwell 1 s
    double gamma_seed = 10.0 / 11.0;
    double mu = 1.0;
    double tolerance = 0.2;        // relative closeness gate vs the reference simulated time
    unsigned jobs = 1;
    std::size_t record_stride = 1000;
};

/// Recomputes both scalar margins from scratch (companion -> Lyapunov ->
/// eigenvalues -> margin) and their invariance under Q -> cQ.
inline std::vector<ScalarCheck> run_scalar_checks() {
    std::vector<ScalarCheck> checks;

    const auto margin_at = [](double c) {
        const auto cert = make_certificate(companion_from_gains(binomial_gains(2, 1.0)),
                                           SymmetricMatrix::scaled_identity(2, c));
        return mu_margin(1.0, cert);
    };
    const auto ft_margin_at = [](double c) {
        const auto cert = make_certificate(companion_from_gains(GainVector{1.0, 6.0}),
                                           SymmetricMatrix::scaled_identity(2, c));
        return fixed_time_margin(1.0, 6.0, cert);
    };

    const double mu1 = margin_at(1.0);
    const double mu1_expected = 1.0 + std::sqrt(2.0) / 2.0;
    checks.push_back({"mu_margin(mu=1, Q=I)", "abs_diff", mu1, mu1_expected, 1e-10,
                      std::abs(mu1 - mu1_expected) <= 1e-10});

    const double ft = ft_margin_at(1.0);
    const double ft_expected = (3.0 - std::sqrt(8.0)) * (10.0 / 3.0 + std::sqrt(10.0));
    checks.push_back({"fixed_time_margin(k=(1,6), Q=I)", "abs_diff", ft, ft_expected, 1e-10,
                      std::abs(ft - ft_expected) <= 1e-10});
    checks.push_back({"fixed_time_margin(k=(1,6), Q=I) exceeds 1", "greater", ft, 1.0, 0.0,
                      ft > 1.0});

    for (double c : {0.5, 2.0}) {
        const double v = margin_at(c);
        checks.push_back({"mu_margin invariant under Q -> " + format_double(c) + "Q", "abs_diff",
                          v, mu1, 1e-9 * mu1, std::abs(v - mu1) <= 1e-9 * mu1});
        const double f = ft_margin_at(c);
        checks.push_back({"fixed_time_margin invariant under Q -> " + format_double(c) + "Q",
                          "abs_diff", f, ft, 1e-9 * ft, std::abs(f - ft) <= 1e-9 * ft});
    }
    return checks;
}

namespace detail {

inline ExperimentRow run_reference_cell(const ReferenceRow& ref, const BenchOptions& opt) {
    ExperimentRow row;
    row.n = ref.n;
    row.x0_scale = ref.x0_scale;
    row.gamma_seed = opt.gamma_seed;
    row.mu = opt.mu;
    row.reference_simulated_s = ref.simulated_s;
    row.reference_estimated_s = ref.estimated_s;

    SimConfig cfg;
    cfg.step_h = opt.step_h;
    cfg.method = opt.method;
    cfg.t_max = default_t_max(static_cast<std::size_t>(ref.n));
    cfg.record_stride = opt.record_stride;
    try {
        const auto run = simulate_closed_loop(static_cast<std::size_t>(ref.n), ref.x0_scale,
                                              opt.gamma_seed, GainScheme{.mu = opt.mu}, cfg,
                                              opt.criterion);
        row.converged = run.report.converged;
        if (row.converged) {
            row.simulated_s = run.report.t_conv;
            row.rate_vs_reference = row.simulated_s > 0.0
                                        ? rate(row.simulated_s, row.reference_estimated_s)
                                        : 0.0;
            const bool close = std::abs(row.simulated_s - row.reference_simulated_s) <=
                               opt.tolerance * row.reference_simulated_s;
            const bool dominated = row.simulated_s <= row.reference_estimated_s;
            row.pass = close && dominated;
            if (!close)
                row.diagnostic = "outside the +/-" + format_double(opt.tolerance * 100.0) +
                                 "% closeness gate";
            else if (!dominated)
                row.diagnostic = "exceeds the reference estimated time";
        } else {
            row.diagnostic = "did not converge within t_max = " + format_double(cfg.t_max) + " s";
        }
    } catch (const BlowUpError& e) {
        row.diagnostic = e.what();
    }
    return row;
}

}  // namespace detail

/// Simulates every reference cell afresh and compares it to the embedded
/// table. Each row passes iff it converged, lies within the closeness
/// tolerance of the reference simulated time, and does not exceed the
/// reference estimated time.
inline ReportBundle run_reference_tables(const BenchOptions& opt) {
    ReportBundle bundle;
    bundle.reference_version = std::string(kReferenceTableVersion);
    bundle.config = {opt.step_h, to_string(opt.method), opt.criterion.epsilon,
                     opt.criterion.dwell, opt.tolerance};
    bundle.rows.resize(kReferenceRows.size());

    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < kReferenceRows.size(); ++i)
            bundle.rows[i] = detail::run_reference_cell(kReferenceRows[i], opt);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= kReferenceRows.size()) return;
                bundle.rows[i] = detail::run_reference_cell(kReferenceRows[i], opt);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bundle.checks = run_scalar_checks();
    return bundle;
}

}  // namespace fintime
