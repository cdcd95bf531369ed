#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace lvnf {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar over arbitrary-precision integers.
//
// Invariants (maintained by every constructor and operator):
//   * denominator > 0
//   * gcd(|numerator|, denominator) == 1
//   * zero is stored as 0/1
//
// Arithmetic never rounds; conversion to double happens only at an explicit
// to_double() call. Conversion *from* double is exact because every finite
// double is a dyadic rational.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt num, BigInt den);

    // Exact conversion of a finite double (sign * mantissa * 2^exp).
    static Rational from_double(double value);

    // Accepts "num", "num/den", and plain decimals like "-1.25" (exact).
    static Rational parse(std::string_view text);

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    bool is_negative() const noexcept { return num_ < 0; }

    // Nearest double; large values may overflow to +/-inf like any narrowing.
    double to_double() const;

    // True when to_double() followed by from_double() gives back *this,
    // i.e. the value is exactly representable in double precision.
    bool fits_double() const;

    // "num/den", or just "num" when the denominator is 1.
    std::string str() const;

    Rational operator-() const;
    Rational abs() const;
    Rational reciprocal() const; // throws DomainError on zero

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs); // throws DomainError on rhs == 0

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    // Canonical form makes memberwise equality exact value equality.
    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace lvnf
