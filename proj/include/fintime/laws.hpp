#pragma once

// Closed-form design artifacts: exponent ladders, gain assignment, the
// finite-time state-feedback law, the differentiator right-hand side, and
// the scalar convergence-margin checks.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fintime/errors.hpp"
#include "fintime/linalg.hpp"

namespace fintime {

/// Ordered exponents g1..gn together with the seed that generated them.
struct ExponentLadder {
    std::size_t n = 0;
    double seed = 0.0;
    Vec values;
};

/// Exponent recursion g_{i-1} = g_i g_{i+1} / (2 g_{i+1} - g_i) seeded with
/// g_{n+1} = 1, g_n = seed. A seed below 1 produces a finite-time ladder in
/// (0, 1]; a seed above 1 a fixed-time ladder with every value >= 1.
inline ExponentLadder exponent_ladder(std::size_t n, double seed) {
    if (n < 1) throw ValidationError("exponent_ladder: n must be >= 1");
    if (!(seed > 0.0) || !std::isfinite(seed))
        throw ValidationError("exponent_ladder: seed must be positive and finite");
    Vec g(n + 2, 0.0);  // 1-based; g[n+1] is the recursion anchor
    g[n + 1] = 1.0;
    g[n] = seed;
    for (std::size_t i = n; i >= 2; --i) {
        const double den = 2.0 * g[i + 1] - g[i];
        if (!(den > 0.0))
            throw DesignError("exponent_ladder: ladder undefined for this seed (denominator <= 0)");
        g[i - 1] = g[i] * g[i + 1] / den;
    }
    ExponentLadder ladder{n, seed, Vec(g.begin() + 1, g.begin() + 1 + n)};
    return ladder;
}

/// Arithmetic ladder a_i = i*seed - (i-1), the reconstruction used for the
/// differentiator exponents. Positive for seed > (n-1)/n.
inline ExponentLadder arithmetic_ladder(std::size_t n, double seed) {
    if (n < 1) throw ValidationError("arithmetic_ladder: n must be >= 1");
    if (!std::isfinite(seed)) throw ValidationError("arithmetic_ladder: non-finite seed");
    ExponentLadder ladder{n, seed, Vec(n)};
    for (std::size_t i = 1; i <= n; ++i) {
        const double v = static_cast<double>(i) * seed - static_cast<double>(i - 1);
        if (!(v > 0.0)) throw ValidationError("arithmetic_ladder: exponent fell to zero or below");
        ladder.values[i - 1] = v;
    }
    return ladder;
}

/// Gain assignment scheme placing all closed-loop poles at -mu.
enum class GainSchemeKind { binomial_multiple_root };

struct GainScheme {
    GainSchemeKind kind = GainSchemeKind::binomial_multiple_root;
    double mu = 1.0;
};

/// Gains k_i = C(n, i-1) mu^(n-i+1), so the closed-loop characteristic
/// polynomial of the companion matrix is (l + mu)^n.
inline GainVector binomial_gains(std::size_t n, double mu) {
    if (n < 1) throw ValidationError("binomial_gains: n must be >= 1");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ValidationError("binomial_gains: mu must be positive and finite");
    Vec k(n);
    double binom = 1.0;  // C(n, 0)
    for (std::size_t i = 1; i <= n; ++i) {
        k[i - 1] = binom * std::pow(mu, static_cast<double>(n - i + 1));
        binom = binom * static_cast<double>(n - (i - 1)) / static_cast<double>(i);
    }
    return GainVector(std::move(k));
}

/// u = sum_i -k_i |x_i|^{g_i} sign(x_i), with sign(0) = 0 so the origin is an
/// equilibrium and u(-x) = -u(x) exactly.
inline double bb_control(std::span<const double> x, const GainVector& gains,
                         const ExponentLadder& ladder) {
    const std::size_t n = x.size();
    if (gains.size() != n || ladder.values.size() != n)
        throw ValidationError("bb_control: dimension mismatch");
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        u -= gains[i] * std::pow(std::abs(xi), ladder.values[i]) * sign_of(xi);
    }
    return u;
}

enum class DiffVariant { basic, modified, smooth };

inline std::string to_string(DiffVariant v) {
    switch (v) {
        case DiffVariant::basic: return "basic";
        case DiffVariant::modified: return "modified";
        case DiffVariant::smooth: return "smooth";
    }
    return "?";
}

/// Differentiator configuration. n is the differentiation order; the state
/// carries n entries (basic/modified) or n+1 (smooth, which moves the relay
/// term into the added last equation). kappa entries may be zero, which
/// disables the fixed-time branch; k must stay strictly positive.
struct DifferentiatorConfig {
    std::size_t n = 2;
    DiffVariant variant = DiffVariant::basic;
    double lambda = 0.0;
    Vec k;
    Vec kappa;
    ExponentLadder alpha;
    ExponentLadder beta;

    std::size_t state_dim() const { return variant == DiffVariant::smooth ? n + 1 : n; }

    /// Builds a validated configuration. Unspecified gains default to the
    /// binomial assignment at mu = 1 over the state dimension; ladders are
    /// arithmetic with the given seeds.
    static DifferentiatorConfig make(std::size_t n, DiffVariant variant, double lambda,
                                     double alpha_seed = 0.9, double beta_seed = 1.1,
                                     std::optional<Vec> k = std::nullopt,
                                     std::optional<Vec> kappa = std::nullopt) {
        if (n < 1) throw ValidationError("DifferentiatorConfig: n must be >= 1");
        DifferentiatorConfig cfg;
        cfg.n = n;
        cfg.variant = variant;
        cfg.lambda = lambda;
        const std::size_t m = cfg.state_dim();
        if (variant == DiffVariant::basic) {
            if (lambda != 0.0)
                throw ValidationError("DifferentiatorConfig: basic variant requires lambda = 0");
        } else if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw ValidationError("DifferentiatorConfig: " + to_string(variant) +
                                  " variant requires lambda > 0");
        }
        const double lo = static_cast<double>(m - 1) / static_cast<double>(m);
        if (!(alpha_seed > lo && alpha_seed < 1.0))
            throw ValidationError("DifferentiatorConfig: alpha seed must lie in ((m-1)/m, 1)");
        if (!(beta_seed > 1.0))
            throw ValidationError("DifferentiatorConfig: beta seed must exceed 1");
        cfg.alpha = arithmetic_ladder(m, alpha_seed);
        cfg.beta = arithmetic_ladder(m, beta_seed);
        cfg.k = k ? std::move(*k) : binomial_gains(m, 1.0).values();
        cfg.kappa = kappa ? std::move(*kappa) : binomial_gains(m, 1.0).values();
        if (cfg.k.size() != m || cfg.kappa.size() != m)
            throw ValidationError("DifferentiatorConfig: gain length must match the state dimension");
        for (double g : cfg.k)
            if (!(g > 0.0) || !std::isfinite(g))
                throw ValidationError("DifferentiatorConfig: k gains must be positive");
        for (double g : cfg.kappa)
            if (!(g >= 0.0) || !std::isfinite(g))
                throw ValidationError("DifferentiatorConfig: kappa gains must be non-negative");
        return cfg;
    }
};

/// Right-hand side of the differentiator driven by the measurement y:
///   dz_i = z_{i+1} - k_i |e|^{a_i} sign(e) - kappa_i |e|^{b_i} sign(e),
/// with e = z_1 - y, the relay term -lambda sign(e) added to the last
/// equation (modified) or to the appended equation (smooth).
inline Vec differentiator_rhs(std::span<const double> z, double y,
                              const DifferentiatorConfig& cfg) {
    const std::size_t m = cfg.state_dim();
    if (z.size() != m) throw ValidationError("differentiator_rhs: state dimension mismatch");
    const double e = z[0] - y;
    const double s = sign_of(e);
    const double ae = std::abs(e);
    Vec dz(m);
    for (std::size_t i = 0; i < m; ++i) {
        double corr = 0.0;
        if (s != 0.0) {
            corr = cfg.k[i] * std::pow(ae, cfg.alpha.values[i]) * s;
            if (cfg.kappa[i] != 0.0) corr += cfg.kappa[i] * std::pow(ae, cfg.beta.values[i]) * s;
        }
        dz[i] = (i + 1 < m ? z[i + 1] : 0.0) - corr;
    }
    dz[m - 1] -= cfg.lambda * s;
    return dz;
}

/// mu * lambda_max(P) / lambda_min(Q), the finite-time applicability margin
/// for the binomial assignment at the given mu.
inline double mu_margin(double mu, const LyapunovCertificate& cert) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu_margin: mu must be positive");
    return mu * cert.lambda_max_p / cert.lambda_min_q;
}

/// (k2 - sqrt(k2^2 - 4 k1)) * lambda_max(P) / lambda_min(Q), the fixed-time
/// margin; defined only when the characteristic roots are real.
inline double fixed_time_margin(double k1, double k2, const LyapunovCertificate& cert) {
    if (!(k1 > 0.0) || !(k2 > 0.0)) throw ValidationError("fixed_time_margin: gains must be positive");
    const double disc = k2 * k2 - 4.0 * k1;
    if (disc < 0.0) throw DesignError("fixed_time_margin: complex roots; margin undefined");
    return (k2 - std::sqrt(disc)) * cert.lambda_max_p / cert.lambda_min_q;
}

}  // namespace fintime
