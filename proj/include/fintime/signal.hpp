#pragma once

// Measured signals y(t) with analytic derivatives of any order.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fintime/errors.hpp"
#include "fintime/linalg.hpp"

namespace fintime {

class Signal {
public:
    enum class Kind { polynomial, sinusoid, constant };

    /// c0 + c1 t + c2 t^2 + ...
    static Signal polynomial(Vec coefficients) {
        if (coefficients.empty()) throw ValidationError("Signal: polynomial needs coefficients");
        if (!all_finite(coefficients)) throw ValidationError("Signal: non-finite coefficient");
        Signal s;
        s.kind_ = Kind::polynomial;
        s.coeffs_ = std::move(coefficients);
        return s;
    }

    /// amplitude * sin(omega t + phase)
    static Signal sinusoid(double amplitude, double omega, double phase = 0.0) {
        if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase))
            throw ValidationError("Signal: non-finite sinusoid parameter");
        Signal s;
        s.kind_ = Kind::sinusoid;
        s.amp_ = amplitude;
        s.omega_ = omega;
        s.phase_ = phase;
        return s;
    }

    static Signal constant(double c) {
        if (!std::isfinite(c)) throw ValidationError("Signal: non-finite constant");
        Signal s;
        s.kind_ = Kind::constant;
        s.coeffs_ = {c};
        return s;
    }

    double value(double t) const { return derivative(0, t); }

    /// d^order/dt^order of the signal, exact for every order.
    double derivative(std::size_t order, double t) const {
        switch (kind_) {
            case Kind::constant:
                return order == 0 ? coeffs_[0] : 0.0;
            case Kind::polynomial: {
                double acc = 0.0;
                for (std::size_t p = coeffs_.size(); p-- > order;) {
                    // c_p * p!/(p-order)! * t^(p-order), Horner over descending powers
                    double fact = 1.0;
                    for (std::size_t f = 0; f < order; ++f) fact *= static_cast<double>(p - f);
                    acc = acc * t + coeffs_[p] * fact;
                }
                return acc;
            }
            case Kind::sinusoid:
                return amp_ * std::pow(omega_, static_cast<double>(order)) *
                       std::sin(omega_ * t + phase_ +
                                static_cast<double>(order) * std::numbers::pi / 2.0);
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::constant:
                os << "const:" << coeffs_[0];
                break;
            case Kind::polynomial:
                os << "poly:";
                for (std::size_t i = 0; i < coeffs_.size(); ++i)
                    os << (i ? "," : "") << coeffs_[i];
                break;
            case Kind::sinusoid:
                os << "sin:" << amp_ << "," << omega_ << "," << phase_;
                break;
        }
        return os.str();
    }

private:
    Signal() = default;
    Kind kind_ = Kind::constant;
    Vec coeffs_;
    double amp_ = 0.0, omega_ = 0.0, phase_ = 0.0;
};

}  // namespace fintime
