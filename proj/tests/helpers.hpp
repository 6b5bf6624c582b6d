#pragma once

// Test-side oracles kept independent of the library implementation paths
// they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace testutil {

/// Closed-form eigenvalues of [[a, b], [b, c]] via trace/determinant.
inline std::pair<double, double> eig2x2_closed_form(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mean - r, mean + r};
}

/// Central finite difference of order `order` (1 or 2) with step h.
template <class F>
double finite_difference(F&& f, std::size_t order, double t, double h) {
    if (order == 0) return f(t);
    if (order == 1) return (f(t + h) - f(t - h)) / (2.0 * h);
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

/// Row n of Pascal's triangle, C(n, 0..n), in exact integer arithmetic.
inline std::vector<std::int64_t> pascal_row(std::size_t n) {
    std::vector<std::int64_t> row{1};
    for (std::size_t r = 1; r <= n; ++r) {
        std::vector<std::int64_t> next(r + 1, 1);
        for (std::size_t i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
        row = std::move(next);
    }
    return row;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed1234u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace testutil
