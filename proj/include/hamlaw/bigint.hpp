#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hamlaw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned k);

// (n)_k = n (n-1) ... (n-k+1); zero when k > n.
BigInt falling_factorial(unsigned n, unsigned k);

BigInt binomial(unsigned n, unsigned k);

Rational power(const Rational& x, unsigned k);

// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

// A double written as mantissa * 2^-exponent with exponent >= 0, both exact.
struct Dyadic {
    BigInt mantissa;
    unsigned exponent = 0;
};
Dyadic to_dyadic(double x);

double to_double(const BigInt& x);
double to_double(const Rational& x);

// log of a positive big integer, accurate to double precision even when x overflows a double.
double log_big(const BigInt& x);

std::string to_decimal(const BigInt& x);
std::string to_decimal(const Rational& x);  // "num/den", or "num" when integral

// Throws InternalConsistency when den does not divide num.
BigInt exact_divide(const BigInt& num, const BigInt& den, const char* what);

}  // namespace hamlaw
