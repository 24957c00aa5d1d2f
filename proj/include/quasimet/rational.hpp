#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace quasimet {

// Exact rational scalar over int64 numerator/denominator.
// Always normalized: denominator > 0, gcd(|num|, den) == 1.
// Arithmetic runs through 128-bit intermediates and throws
// std::overflow_error when a result leaves the 64-bit range.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den);

    // Accepts "p/q", integer, and plain decimal literals ("-3", "1.3", "2.5e-2").
    static Rational parse(std::string_view text);

    // Exact value of the shortest decimal literal that round-trips the double,
    // so 1.3 becomes 13/10 rather than the binary expansion of the double.
    static Rational from_double(double value);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational abs(const Rational& r);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace quasimet
