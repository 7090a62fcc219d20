#include "advflow/rational.hpp"

#include "advflow/error.hpp"

#include <cstdlib>
#include <limits>

namespace advflow {

std::size_t guard_limit(std::size_t fallback) {
  if (const char* env = std::getenv("ADVFLOW_GUARD")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

std::string to_string(const Rational& r) { return num(r).str() + "/" + den(r).str(); }

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt n(std::string(text.substr(0, slash)));
    BigInt d(std::string(text.substr(slash + 1)));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

BigInt floor(const Rational& r) {
  BigInt q = num(r) / den(r);  // truncates toward zero
  if (num(r) < 0 && q * den(r) != num(r)) q -= 1;
  return q;
}

bool is_integer(const Rational& r) { return den(r) == 1; }

long long to_int64(const Rational& r) {
  if (!is_integer(r)) throw std::domain_error("rational is not integral: " + to_string(r));
  const BigInt& n = num(r);
  if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
    throw std::overflow_error("rational out of 64-bit range");
  return n.convert_to<long long>();
}

}  // namespace advflow
