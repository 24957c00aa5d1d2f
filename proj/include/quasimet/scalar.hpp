#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "quasimet/rational.hpp"

namespace quasimet {

// Shared hooks so that the finite-space modules can be instantiated with
// either the exact rational backend or plain doubles.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational abs(const Rational& v) { return quasimet::abs(v); }
    static Rational default_tolerance() { return Rational(0); }
    static bool finite(const Rational&) { return true; }
    static double to_double(const Rational& v) { return v.to_double(); }
    static std::string to_string(const Rational& v) { return v.to_string(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double abs(double v) { return std::fabs(v); }
    static double default_tolerance() { return 1e-9; }
    static bool finite(double v) { return std::isfinite(v); }
    static double to_double(double v) { return v; }
    static std::string to_string(double v) { return std::to_string(v); }
};

// |a - b| <= tol, with tol = 0 meaning exact equality.
template <class S>
bool near(const S& a, const S& b, const S& tol) {
    return scalar_traits<S>::abs(a - b) <= tol;
}

}  // namespace quasimet
