// Builds Lyapunov certificates for two gain sets and prints the margins.

#include <iostream>

#include "fintime/fintime.hpp"

int main() {
    using namespace fintime;

    // Repeated-root assignment at mu = 1: gains (1, 2).
    const auto cert1 = make_certificate(companion_from_gains(binomial_gains(2, 1.0)),
                                        SymmetricMatrix::identity(2));
    std::cout << "gains (1,2):  lambda_max(P) = " << cert1.lambda_max_p
              << ", residual = " << cert1.residual_norm << "\n";
    std::cout << "  mu-margin at mu=1: " << mu_margin(1.0, cert1) << " (expected 1+sqrt(2)/2)\n";

    // Distinct real roots: gains (1, 6).
    const auto cert2 = make_certificate(companion_from_gains(GainVector{1.0, 6.0}),
                                        SymmetricMatrix::identity(2));
    std::cout << "gains (1,6):  lambda_max(P) = " << cert2.lambda_max_p << "\n";
    std::cout << "  fixed-time margin: " << fixed_time_margin(1.0, 6.0, cert2) << " (> 1)\n";

    // A non-Hurwitz design is rejected.
    try {
        SquareMatrix a(2);
        a(0, 1) = 1.0;
        a(1, 0) = 1.0;  // saddle
        solve_lyapunov(a, SymmetricMatrix::identity(2));
    } catch (const DesignError& e) {
        std::cout << "non-Hurwitz rejected: " << e.what() << "\n";
    }
    return 0;
}
