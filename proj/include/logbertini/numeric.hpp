#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace logbertini {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a field cannot decide a question this toolkit needs answered
// (e.g. prime-to-p root existence for a non-constant rational function).
struct unsupported_field_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int int_gcd(Int a, Int b) {
  a = int_abs(a);
  b = int_abs(b);
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// g = gcd(a,b) together with x,y such that x*a + y*b = g.
struct ExtGcd {
  Int g, x, y;
};

inline ExtGcd ext_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b;
  Int old_x = 1, x = 0;
  Int old_y = 0, y = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int t;
    t = old_r - q * r; old_r = r; r = t;
    t = old_x - q * x; old_x = x; x = t;
    t = old_y - q * y; old_y = y; y = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_x = -old_x;
    old_y = -old_y;
  }
  return {old_r, old_x, old_y};
}

// Trial division; fine for the invariant factors met at desk scale.
inline std::vector<Int> prime_factors(Int n) {
  std::vector<Int> out;
  n = int_abs(n);
  if (n <= 1) return out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

inline long long to_ll(const Int& a) {
  if (a > std::numeric_limits<long long>::max() ||
      a < std::numeric_limits<long long>::min())
    throw std::overflow_error("integer too large for int64 conversion");
  return static_cast<long long>(a);
}

inline std::string rat_to_string(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  if (den == 0) throw config_error("rational with zero denominator: " + s);
  return Rat(num, den);
}

}  // namespace logbertini
