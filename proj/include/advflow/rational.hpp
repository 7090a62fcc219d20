#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace advflow {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Canonical "num/den" form; integers print with denominator 1.
std::string to_string(const Rational& r);

/// Accepts "a/b" or a bare integer "a".
Rational parse_rational(std::string_view text);

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

BigInt lcm(const BigInt& a, const BigInt& b);

/// Largest integer <= r.
BigInt floor(const Rational& r);

bool is_integer(const Rational& r);

/// Converts an integral rational that fits in 64 bits; throws otherwise.
long long to_int64(const Rational& r);

}  // namespace advflow
