#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "logbertini/numeric.hpp"

namespace logbertini {

// The rational numbers as a field context object, so templated code can run
// over Q with the same shape it uses over F_q.
class QField {
 public:
  using Elem = Rat;

  Elem zero() const { return Rat(0); }
  Elem one() const { return Rat(1); }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  Elem from_int(const Int& k) const { return Rat(k); }
  Int characteristic() const { return 0; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw std::domain_error("QField: inverse of zero");
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return a * inv(b); }

  Elem pow(Elem a, Int e) const {
    if (e < 0) { a = inv(a); e = -e; }
    Elem acc = one();
    while (e > 0) {
      if ((e & 1) != 0) acc = acc * a;
      a = a * a;
      e >>= 1;
    }
    return acc;
  }

  std::string to_string(const Elem& a) const { return rat_to_string(a); }

  // exact n-th root: numerator and denominator must both be integer n-th
  // powers (the sign goes to the numerator; even n rejects negatives)
  std::optional<Elem> nth_root(const Elem& u, const Int& n) const {
    if (n <= 0) throw config_error("QField: root order must be positive");
    if (u == 0) return zero();
    Int num = boost::multiprecision::numerator(u);
    Int den = boost::multiprecision::denominator(u);
    bool negative = num < 0;
    if (negative && n % 2 == 0) return std::nullopt;
    auto rn = int_nth_root(int_abs(num), n);
    auto rd = int_nth_root(den, n);
    if (!rn || !rd) return std::nullopt;
    Int top = negative ? Int(-*rn) : *rn;
    return Rat(top, *rd);
  }

 private:
  static std::optional<Int> int_nth_root(const Int& a, const Int& n) {
    if (a == 0) return Int(0);
    Int lo = 1, hi = 1;
    while (int_pow(hi, n) < a) hi *= 2;
    while (lo < hi) {
      Int mid = (lo + hi) / 2;
      if (int_pow(mid, n) < a) lo = mid + 1; else hi = mid;
    }
    if (int_pow(lo, n) == a) return lo;
    return std::nullopt;
  }

  static Int int_pow(Int b, Int e) {
    Int acc = 1;
    while (e > 0) {
      if ((e & 1) != 0) acc *= b;
      b *= b;
      e >>= 1;
    }
    return acc;
  }
};

}  // namespace logbertini
