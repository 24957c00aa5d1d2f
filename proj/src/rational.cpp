#include "quasimet/rational.hpp"

#include <charconv>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace quasimet {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

struct Norm {
    std::int64_t num;
    std::int64_t den;
};

Norm normalize(i128 num, i128 den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {narrow(num), narrow(den)};
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    Norm n = normalize(i128(num), i128(den));
    num_ = n.num;
    den_ = n.den;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-i128(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    Norm n = normalize(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    num_ = n.num;
    den_ = n.den;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    Norm n = normalize(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    num_ = n.num;
    den_ = n.den;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    Norm n = normalize(i128(num_) * o.num_, i128(den_) * o.den_);
    num_ = n.num;
    den_ = n.den;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    Norm n = normalize(i128(num_) * o.den_, i128(den_) * o.num_);
    num_ = n.num;
    den_ = n.den;
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = 0;
        std::int64_t den = 0;
        auto ntext = text.substr(0, slash);
        auto dtext = text.substr(slash + 1);
        auto r1 = std::from_chars(ntext.data(), ntext.data() + ntext.size(), num);
        auto r2 = std::from_chars(dtext.data(), dtext.data() + dtext.size(), den);
        if (r1.ec != std::errc() || r1.ptr != ntext.data() + ntext.size() ||
            r2.ec != std::errc() || r2.ptr != dtext.data() + dtext.size()) {
            throw std::invalid_argument("bad rational literal: " + std::string(text));
        }
        return Rational(num, den);
    }

    // Decimal literal: sign digits [. digits] [e sign digits]
    bool negative = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    i128 mantissa = 0;
    int frac_digits = 0;
    bool seen_digit = false;
    bool in_fraction = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (in_fraction) throw std::invalid_argument("bad rational literal: " + std::string(text));
            in_fraction = true;
        } else if (c >= '0' && c <= '9') {
            seen_digit = true;
            mantissa = mantissa * 10 + (c - '0');
            if (mantissa > i128(std::numeric_limits<std::int64_t>::max())) {
                throw std::overflow_error("rational literal out of range: " + std::string(text));
            }
            if (in_fraction) ++frac_digits;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw std::invalid_argument("bad rational literal: " + std::string(text));
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad rational literal: " + std::string(text));

    int exponent = 0;
    if (i < text.size()) {  // positioned at 'e'
        auto etext = text.substr(i + 1);
        auto r = std::from_chars(etext.data(), etext.data() + etext.size(), exponent);
        if (r.ec != std::errc() || r.ptr != etext.data() + etext.size() ||
            exponent > 64 || exponent < -64) {
            throw std::invalid_argument("bad rational literal: " + std::string(text));
        }
    }

    i128 num = negative ? -mantissa : mantissa;
    i128 den = 1;
    int pow10 = exponent - frac_digits;
    for (int k = 0; k < pow10; ++k) {
        num *= 10;
        if (abs128(num) > i128(std::numeric_limits<std::int64_t>::max())) {
            throw std::overflow_error("rational literal out of range: " + std::string(text));
        }
    }
    for (int k = 0; k < -pow10; ++k) {
        den *= 10;
        if (den > i128(std::numeric_limits<std::int64_t>::max())) {
            throw std::overflow_error("rational literal out of range: " + std::string(text));
        }
    }
    Norm n = normalize(num, den);
    Rational r;
    r.num_ = n.num;
    r.den_ = n.den;
    return r;
}

Rational Rational::from_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw std::invalid_argument("unrepresentable double");
    return parse(std::string_view(buf, res.ptr - buf));
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace quasimet
