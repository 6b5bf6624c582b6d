#pragma once

// Small dense linear algebra for controller certificates (dim <= 8):
// companion matrices, Lyapunov equation solves, symmetric eigenvalues.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fintime/errors.hpp"

namespace fintime {

using Vec = std::vector<double>;

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Strictly positive gains k1..kn.
class GainVector {
public:
    explicit GainVector(Vec k) : k_(std::move(k)) {
        if (k_.empty()) throw ValidationError("GainVector: empty");
        for (double g : k_)
            if (!(g > 0.0) || !std::isfinite(g))
                throw ValidationError("GainVector: gains must be positive and finite");
    }
    GainVector(std::initializer_list<double> k) : GainVector(Vec(k)) {}

    std::size_t size() const { return k_.size(); }
    double operator[](std::size_t i) const { return k_[i]; }
    const Vec& values() const { return k_; }

private:
    Vec k_;
};

/// Dense row-major square matrix.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t dim) : dim_(dim), e_(dim * dim, 0.0) {
        if (dim < 1) throw ValidationError("SquareMatrix: dim must be >= 1");
    }

    static SquareMatrix identity(std::size_t dim) {
        SquareMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    double& operator()(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }
    const Vec& entries() const { return e_; }

    double max_abs() const {
        double m = 0.0;
        for (double x : e_) m = std::max(m, std::abs(x));
        return m;
    }

    bool finite() const { return all_finite(e_); }

private:
    std::size_t dim_;
    Vec e_;  // row-major
};

/// Symmetric matrix stored as a packed upper triangle, so symmetry is exact
/// by construction.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t dim) : dim_(dim), e_(dim * (dim + 1) / 2, 0.0) {
        if (dim < 1) throw ValidationError("SymmetricMatrix: dim must be >= 1");
    }

    static SymmetricMatrix identity(std::size_t dim) { return scaled_identity(dim, 1.0); }

    static SymmetricMatrix scaled_identity(std::size_t dim, double c) {
        SymmetricMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m.set(i, i, c);
        return m;
    }

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return e_[pack(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { e_[pack(i, j)] = v; }

    double max_abs() const {
        double m = 0.0;
        for (double x : e_) m = std::max(m, std::abs(x));
        return m;
    }

    bool finite() const { return all_finite(e_); }

    SquareMatrix full() const {
        SquareMatrix m(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    /// Packed index of entry (i, j); order within the triangle is row-major.
    std::size_t pack(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return i * dim_ - i * (i - 1) / 2 + (j - i);
    }

private:
    std::size_t dim_;
    Vec e_;  // packed upper triangle
};

/// Closed-loop companion matrix of an integrator chain under linear gains:
/// superdiagonal ones, last row (-k1 ... -kn). Its characteristic polynomial
/// is l^n + kn l^(n-1) + ... + k1.
inline SquareMatrix companion_from_gains(const GainVector& gains) {
    const std::size_t n = gains.size();
    SquareMatrix a(n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = -gains[j];
    return a;
}

/// Coefficients (c1..cn) of det(lI - A) = l^n + c1 l^(n-1) + ... + cn,
/// by the Faddeev-LeVerrier recurrence. Exact up to rounding for dim <= 8.
inline Vec characteristic_polynomial(const SquareMatrix& a) {
    const std::size_t n = a.dim();
    if (!a.finite()) throw ValidationError("characteristic_polynomial: non-finite entries");
    Vec coeffs(n, 0.0);
    SquareMatrix m = a;  // M1 = A
    for (std::size_t k = 1; k <= n; ++k) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
        const double ck = -tr / static_cast<double>(k);
        coeffs[k - 1] = ck;
        if (k == n) break;
        // M_{k+1} = A (M_k + c_k I)
        SquareMatrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) += ck;
        SquareMatrix next(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l) s += a(i, l) * shifted(l, j);
                next(i, j) = s;
            }
        m = next;
    }
    return coeffs;
}

/// Routh-Hurwitz test on l^n + c1 l^(n-1) + ... + cn. Returns true iff every
/// root lies in the open left half-plane. Marginal cases (a zero in the first
/// column) are reported as not Hurwitz.
inline bool is_hurwitz(const Vec& coeffs) {
    const std::size_t n = coeffs.size();
    if (n == 0) throw ValidationError("is_hurwitz: empty polynomial");
    for (double c : coeffs)
        if (!(c > 0.0)) return false;  // positivity is necessary
    if (n <= 2) return true;           // and sufficient for n <= 2
    // Rows of the Routh array, starting from the full coefficient list
    // (1, c1, ..., cn).
    const std::size_t w = n / 2 + 1;
    Vec prev(w, 0.0), curr(w, 0.0);
    for (std::size_t j = 0; j < w; ++j) {
        const std::size_t e = 2 * j;      // 1, c2, c4, ...
        const std::size_t o = 2 * j + 1;  // c1, c3, c5, ...
        prev[j] = (e == 0) ? 1.0 : (e <= n ? coeffs[e - 1] : 0.0);
        curr[j] = o <= n ? coeffs[o - 1] : 0.0;
    }
    for (std::size_t row = 2; row <= n; ++row) {
        if (curr[0] == 0.0) return false;
        Vec next(w, 0.0);
        for (std::size_t j = 0; j + 1 < w; ++j)
            next[j] = (curr[0] * prev[j + 1] - prev[0] * curr[j + 1]) / curr[0];
        if (next[0] <= 0.0) return false;
        prev = curr;
        curr = next;
    }
    return true;
}

inline bool is_hurwitz(const SquareMatrix& a) { return is_hurwitz(characteristic_polynomial(a)); }

namespace detail {

/// LU factorization with partial pivoting of a dense m x m system.
struct Lu {
    std::size_t m;
    Vec lu;                        // row-major, combined L\U
    std::vector<std::size_t> piv;

    explicit Lu(Vec matrix, std::size_t m) : m(m), lu(std::move(matrix)), piv(m) {
        for (std::size_t i = 0; i < m; ++i) piv[i] = i;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t p = col;
            double best = std::abs(lu[col * m + col]);
            for (std::size_t r = col + 1; r < m; ++r) {
                const double v = std::abs(lu[r * m + col]);
                if (v > best) { best = v; p = r; }
            }
            if (best == 0.0) throw NumericalError("linear system is singular");
            if (p != col) {
                for (std::size_t j = 0; j < m; ++j) std::swap(lu[p * m + j], lu[col * m + j]);
                std::swap(piv[p], piv[col]);
            }
            const double d = lu[col * m + col];
            for (std::size_t r = col + 1; r < m; ++r) {
                const double f = lu[r * m + col] / d;
                lu[r * m + col] = f;
                for (std::size_t j = col + 1; j < m; ++j) lu[r * m + j] -= f * lu[col * m + j];
            }
        }
    }

    Vec solve(const Vec& b) const {
        Vec x(m);
        for (std::size_t i = 0; i < m; ++i) x[i] = b[piv[i]];
        for (std::size_t i = 1; i < m; ++i) {
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= lu[i * m + j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = m; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < m; ++j) s -= lu[i * m + j] * x[j];
            x[i] = s / lu[i * m + i];
        }
        return x;
    }
};

}  // namespace detail

/// Max-abs norm of A'P + PA + Q, the defect of a candidate Lyapunov solution.
inline double lyapunov_residual(const SquareMatrix& a, const SymmetricMatrix& p,
                                const SymmetricMatrix& q) {
    const std::size_t n = a.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = q(i, j);
            for (std::size_t k = 0; k < n; ++k) s += a(k, i) * p(k, j) + p(i, k) * a(k, j);
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

/// Solves A'P + PA = -Q for symmetric P, as a direct dense solve over the
/// n(n+1)/2 packed upper-triangle unknowns (Gaussian elimination with partial
/// pivoting plus one long-double refinement pass). Requires A Hurwitz and Q
/// symmetric positive definite so that P is the unique PD solution.
inline SymmetricMatrix solve_lyapunov(const SquareMatrix& a, const SymmetricMatrix& q) {
    const std::size_t n = a.dim();
    if (q.dim() != n) throw ValidationError("solve_lyapunov: dimension mismatch");
    if (!a.finite() || !q.finite()) throw ValidationError("solve_lyapunov: non-finite entries");
    if (!is_hurwitz(a))
        throw DesignError("solve_lyapunov: no unique positive definite solution (A is not Hurwitz)");

    const std::size_t m = n * (n + 1) / 2;
    SymmetricMatrix pattern(n);  // for pack()
    Vec sys(m * m, 0.0);
    Vec rhs(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t row = pattern.pack(i, j);
            rhs[row] = -q(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                sys[row * m + pattern.pack(k, j)] += a(k, i);
                sys[row * m + pattern.pack(i, k)] += a(k, j);
            }
        }

    detail::Lu lu(sys, m);
    Vec x = lu.solve(rhs);
    // One refinement pass; the residual is accumulated in long double to keep
    // the certificate residual near machine level for stiff gain sets.
    for (int pass = 0; pass < 2; ++pass) {
        Vec r(m);
        for (std::size_t i = 0; i < m; ++i) {
            long double s = rhs[i];
            for (std::size_t j = 0; j < m; ++j)
                s -= static_cast<long double>(sys[i * m + j]) * x[j];
            r[i] = static_cast<double>(s);
        }
        Vec dx = lu.solve(r);
        for (std::size_t i = 0; i < m; ++i) x[i] += dx[i];
    }

    SymmetricMatrix p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) p.set(i, j, x[pattern.pack(i, j)]);
    if (!p.finite()) throw NumericalError("solve_lyapunov: solution is not finite");

    const double tol = 1e-10 * (1.0 + q.max_abs());
    if (lyapunov_residual(a, p, q) >= tol)
        throw NumericalError("solve_lyapunov: residual exceeds certification tolerance");
    return p;
}

/// Extremal eigenvalues (min, max) of a symmetric matrix via cyclic Jacobi
/// rotations; absolute accuracy near machine level for dim <= 8.
inline std::pair<double, double> sym_extreme_eigen(const SymmetricMatrix& p) {
    if (!p.finite()) throw ValidationError("sym_extreme_eigen: non-finite entries");
    const std::size_t n = p.dim();
    SquareMatrix a = p.full();
    if (n > 1) {
        double prev_off = std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < 60; ++sweep) {
            double off = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
            if (off == 0.0 || off >= prev_off) break;  // converged or stalled at rounding level
            prev_off = off;
            for (std::size_t pi = 0; pi < n; ++pi)
                for (std::size_t qi = pi + 1; qi < n; ++qi) {
                    const double apq = a(pi, qi);
                    if (apq == 0.0) continue;
                    const double theta = (a(qi, qi) - a(pi, pi)) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);
                    const double app = a(pi, pi), aqq = a(qi, qi);
                    a(pi, pi) = app - t * apq;
                    a(qi, qi) = aqq + t * apq;
                    a(pi, qi) = 0.0;
                    a(qi, pi) = 0.0;
                    for (std::size_t r = 0; r < n; ++r) {
                        if (r == pi || r == qi) continue;
                        const double arp = a(r, pi), arq = a(r, qi);
                        a(r, pi) = a(pi, r) = arp - s * (arq + tau * arp);
                        a(r, qi) = a(qi, r) = arq + s * (arp - tau * arq);
                    }
                }
        }
    }
    double lo = a(0, 0), hi = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, a(i, i));
        hi = std::max(hi, a(i, i));
    }
    return {lo, hi};
}

/// A, Q, the solved P, extremal eigenvalues, and the equation residual.
/// Existence of the object certifies: A Hurwitz, Q and P positive definite,
/// residual below 1e-10 * (1 + max-abs(Q)).
struct LyapunovCertificate {
    SquareMatrix a;
    SymmetricMatrix q;
    SymmetricMatrix p;
    double lambda_min_p = 0.0;
    double lambda_max_p = 0.0;
    double lambda_min_q = 0.0;
    double residual_norm = 0.0;
};

inline LyapunovCertificate make_certificate(const SquareMatrix& a, const SymmetricMatrix& q) {
    const auto [q_lo, q_hi] = sym_extreme_eigen(q);
    (void)q_hi;
    if (!(q_lo > 0.0)) throw ValidationError("make_certificate: Q must be positive definite");
    SymmetricMatrix p = solve_lyapunov(a, q);
    const auto [p_lo, p_hi] = sym_extreme_eigen(p);
    if (!(p_lo > 0.0)) throw NumericalError("make_certificate: P is not positive definite");
    LyapunovCertificate cert{a, q, p, p_lo, p_hi, q_lo, lyapunov_residual(a, p, q)};
    return cert;
}

}  // namespace fintime
