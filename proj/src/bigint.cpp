#include "hamlaw/bigint.hpp"

#include <cmath>

#include "hamlaw/errors.hpp"

namespace hamlaw {

namespace mp = boost::multiprecision;

BigInt factorial(unsigned k) {
    BigInt out = 1;
    for (unsigned i = 2; i <= k; ++i) out *= i;
    return out;
}

BigInt falling_factorial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt out = 1;
    for (unsigned i = 0; i < k; ++i) out *= (n - i);
    return out;
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    return falling_factorial(n, k) / factorial(k);
}

Dyadic to_dyadic(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("to_dyadic: non-finite value");
    Dyadic d;
    if (x == 0.0) return d;
    int exp2 = 0;
    const double frac = std::frexp(std::fabs(x), &exp2);  // |x| = frac * 2^exp2, frac in [0.5,1)
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    int e = exp2 - 53;
    while (mant % 2 == 0 && e < 0) {
        mant /= 2;
        ++e;
    }
    d.mantissa = mant;
    if (e >= 0) {
        d.mantissa <<= e;
        d.exponent = 0;
    } else {
        d.exponent = static_cast<unsigned>(-e);
    }
    if (x < 0) d.mantissa = -d.mantissa;
    return d;
}

Rational exact_rational(double x) {
    const Dyadic d = to_dyadic(x);
    BigInt den = 1;
    den <<= d.exponent;
    return Rational(d.mantissa, den);
}

Rational power(const Rational& x, unsigned k) {
    return Rational(mp::pow(mp::numerator(x), k), mp::pow(mp::denominator(x), k));
}

double to_double(const BigInt& x) {
    if (x == 0) return 0.0;
    const bool neg = x < 0;
    BigInt a = neg ? BigInt(-x) : x;
    const long bits = static_cast<long>(mp::msb(a)) + 1;
    double out = 0.0;
    if (bits <= 63) {
        out = static_cast<double>(a.convert_to<std::uint64_t>());
    } else {
        const long shift = bits - 63;
        BigInt top = a >> shift;
        out = std::ldexp(static_cast<double>(top.convert_to<std::uint64_t>()), static_cast<int>(shift));
    }
    return neg ? -out : out;
}

double to_double(const Rational& x) {
    const BigInt num = mp::numerator(x);
    const BigInt den = mp::denominator(x);
    if (num == 0) return 0.0;
    const bool neg = num < 0;
    BigInt a = neg ? BigInt(-num) : num;
    // scale so the integer quotient carries ~64 significant bits
    const long shift = 64 - (static_cast<long>(mp::msb(a)) - static_cast<long>(mp::msb(den)));
    BigInt q = shift >= 0 ? BigInt((a << shift) / den) : BigInt(a / (BigInt(1) << -shift));
    double out = std::ldexp(to_double(q), static_cast<int>(-shift));
    return neg ? -out : out;
}

double log_big(const BigInt& x) {
    if (x <= 0) throw InvalidArgument("log_big: non-positive argument");
    const long bits = static_cast<long>(mp::msb(x)) + 1;
    if (bits <= 1000) return std::log(to_double(x));
    const long shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(to_double(top)) + static_cast<double>(shift) * std::log(2.0);
}

std::string to_decimal(const BigInt& x) { return x.str(); }

std::string to_decimal(const Rational& x) {
    const BigInt num = mp::numerator(x);
    const BigInt den = mp::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

BigInt exact_divide(const BigInt& num, const BigInt& den, const char* what) {
    if (den == 0) throw InternalConsistency(std::string(what) + ": division by zero");
    BigInt q, r;
    mp::divide_qr(num, den, q, r);
    if (r != 0) {
        throw InternalConsistency(std::string(what) + ": " + num.str() + " is not divisible by " + den.str());
    }
    return q;
}

}  // namespace hamlaw
