#pragma once

// Settling-time upper-bound estimation: the Lyapunov value, a pluggable
// bound estimator (embedded reference table, power-law reconstruction, or a
// user-supplied formula), and the rate metric.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>

#include "fintime/errors.hpp"
#include "fintime/laws.hpp"
#include "fintime/linalg.hpp"
#include "fintime/reference_table.hpp"

namespace fintime {

/// x0' P x0.
inline double lyapunov_value(std::span<const double> x0, const SymmetricMatrix& p) {
    const std::size_t n = p.dim();
    if (x0.size() != n) throw ValidationError("lyapunov_value: dimension mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v += x0[i] * p(i, j) * x0[j];
    return v;
}

struct BoundInput {
    LyapunovCertificate cert;
    ExponentLadder ladder;
    double v0 = 0.0;  // Lyapunov value at the initial state
};

/// Looks up the published estimated time for one benchmark cell.
struct ReferenceTableEstimator {
    int n = 2;
    double x0_scale = 1.0;
};

/// T = prefactor * v0^exponent. The defaults reconstruct the standard
/// settling-time bound shape for dV <= -c V^((1+g1)/2):
///   prefactor = 2 lambda_max(P) / (lambda_min(Q) (1 - g1)),
///   exponent  = (1 - g1) / 2.
struct PowerLawEstimator {
    std::optional<double> prefactor;
    std::optional<double> exponent;
};

using UserEstimator = std::function<double(const BoundInput&)>;

using Estimator = std::variant<ReferenceTableEstimator, PowerLawEstimator, UserEstimator>;

/// Upper bound on the settling time for a finite-time ladder (g1 < 1).
inline double finite_time_bound(const BoundInput& input, const Estimator& estimator) {
    if (input.ladder.values.empty() || !(input.ladder.values.front() < 1.0))
        throw DesignError("finite_time_bound: not a finite-time ladder (gamma_1 >= 1)");
    if (!(input.v0 >= 0.0)) throw ValidationError("finite_time_bound: v0 must be >= 0");

    if (const auto* ref = std::get_if<ReferenceTableEstimator>(&estimator)) {
        const ReferenceRow* row = find_reference_row(ref->n, ref->x0_scale);
        if (!row) throw DesignError("finite_time_bound: no reference row for this configuration");
        return row->estimated_s;
    }
    if (const auto* pl = std::get_if<PowerLawEstimator>(&estimator)) {
        if (input.v0 == 0.0) return 0.0;
        const double g1 = input.ladder.values.front();
        const double prefactor =
            pl->prefactor ? *pl->prefactor
                          : 2.0 * input.cert.lambda_max_p /
                                (input.cert.lambda_min_q * (1.0 - g1));
        const double exponent = pl->exponent ? *pl->exponent : (1.0 - g1) / 2.0;
        return prefactor * std::pow(input.v0, exponent);
    }
    const auto& user = std::get<UserEstimator>(estimator);
    if (!user) throw ValidationError("finite_time_bound: empty user estimator");
    return user(input);
}

/// estimated / simulated.
inline double rate(double simulated_s, double estimated_s) {
    if (!(simulated_s > 0.0)) throw ValidationError("rate: simulated time must be > 0");
    return estimated_s / simulated_s;
}

}  // namespace fintime
