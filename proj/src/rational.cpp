#include "lvnf/rational.hpp"

#include "lvnf/errors.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <utility>

namespace lvnf {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) {
        throw DomainError("rational with zero denominator");
    }
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::from_double(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("cannot convert non-finite double to rational");
    }
    if (value == 0.0) {
        return Rational();
    }
    int exp = 0;
    double mantissa = std::frexp(value, &exp); // value = mantissa * 2^exp, |mantissa| in [0.5, 1)
    auto scaled = static_cast<long long>(std::ldexp(mantissa, 53)); // exact: 53-bit significand
    exp -= 53;
    BigInt num(scaled);
    BigInt den(1);
    if (exp > 0) {
        num <<= exp;
    } else if (exp < 0) {
        den <<= -exp;
    }
    return Rational(std::move(num), std::move(den));
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw ValidationError("cannot parse rational from '" + std::string(text) + "'");
    };
    if (text.empty()) {
        return fail();
    }

    auto is_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char ch : s) {
            if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        }
        return true;
    };
    auto parse_signed = [&](std::string_view s) -> BigInt {
        bool negative = false;
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }
        if (!is_digits(s)) fail();
        BigInt v{std::string(s)};
        return negative ? BigInt(-v) : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num_part = text.substr(0, slash);
        std::string_view den_part = text.substr(slash + 1);
        if (num_part.empty() || den_part.empty() || den_part.find('/') != std::string_view::npos) {
            fail();
        }
        BigInt num = parse_signed(num_part);
        BigInt den = parse_signed(den_part);
        if (den == 0) {
            throw ValidationError("rational denominator must be nonzero in '" + std::string(text) + "'");
        }
        return Rational(std::move(num), std::move(den));
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        if (frac_part.empty() || !is_digits(frac_part)) fail();
        bool negative = !int_part.empty() && int_part.front() == '-';
        BigInt whole = int_part.empty() || int_part == "-" || int_part == "+"
                           ? BigInt(0)
                           : parse_signed(int_part);
        BigInt den(1);
        for (size_t i = 0; i < frac_part.size(); ++i) den *= 10;
        BigInt frac{std::string(frac_part)};
        BigInt num = whole * den + (negative || whole < 0 ? BigInt(-frac) : frac);
        if (negative && whole == 0) num = -frac;
        return Rational(std::move(num), std::move(den));
    }

    return Rational(parse_signed(text));
}

double Rational::to_double() const {
    // cpp_rational implements a precision-aware conversion; going through it
    // avoids overflow when both components exceed the double range.
    return boost::multiprecision::cpp_rational(num_, den_).convert_to<double>();
}

bool Rational::fits_double() const {
    double approx = to_double();
    if (!std::isfinite(approx)) return false;
    return from_double(approx) == *this;
}

std::string Rational::str() const {
    std::string out = num_.str();
    if (den_ != 1) {
        out += '/';
        out += den_.str();
    }
    return out;
}

Rational Rational::operator-() const {
    Rational r(*this);
    r.num_ = -r.num_;
    return r;
}

Rational Rational::abs() const {
    return num_ < 0 ? -*this : *this;
}

Rational Rational::reciprocal() const {
    if (num_ == 0) {
        throw DomainError("reciprocal of zero");
    }
    return Rational(den_, num_);
}

Rational& Rational::operator+=(const Rational& rhs) {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    num_ = num_ * rhs.den_ - rhs.num_ * den_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    num_ *= rhs.num_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) {
        throw DomainError("division of rational by zero");
    }
    num_ *= rhs.den_;
    den_ *= rhs.num_;
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // Denominators are positive, so cross-multiplication preserves order.
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace lvnf
