#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Univariate polynomials in the uniformizer pi with exact rational
// coefficients, stored low degree first with no trailing zeros.
using QPi = std::vector<Rat>;

namespace qpi {

inline void trim(QPi& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline bool is_zero(const QPi& p) { return p.empty(); }

inline long deg(const QPi& p) { return static_cast<long>(p.size()) - 1; }

inline QPi constant(const Rat& c) { return c == 0 ? QPi{} : QPi{c}; }

inline QPi add(const QPi& a, const QPi& b) {
  QPi out(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

inline QPi neg(const QPi& a) {
  QPi out = a;
  for (Rat& c : out) c = -c;
  return out;
}

inline QPi sub(const QPi& a, const QPi& b) { return add(a, neg(b)); }

inline QPi mul(const QPi& a, const QPi& b) {
  if (a.empty() || b.empty()) return {};
  QPi out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline QPi scale(const QPi& a, const Rat& c) {
  if (c == 0) return {};
  QPi out = a;
  for (Rat& x : out) x *= c;
  return out;
}

// Order of vanishing at pi = 0; only valid on nonzero polynomials.
inline long order(const QPi& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) return static_cast<long>(i);
  throw config_error("qpi: order of the zero polynomial");
}

inline Rat eval0(const QPi& a) { return a.empty() ? Rat(0) : a[0]; }

inline std::pair<QPi, QPi> divmod(const QPi& a, const QPi& b) {
  if (b.empty()) throw config_error("qpi: division by zero");
  QPi r = a, q(a.size(), Rat(0));
  const long db = deg(b);
  while (deg(r) >= db) {
    const long shift = deg(r) - db;
    Rat c = r.back() / b.back();
    q[shift] += c;
    for (long i = 0; i <= db; ++i) r[shift + i] -= c * b[i];
    trim(r);
  }
  trim(q);
  return {q, r};
}

inline QPi gcd(QPi a, QPi b) {
  while (!b.empty()) {
    QPi r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (Rat& c : a) c /= lead;
  }
  return a;
}

inline std::string to_string(const QPi& a) {
  if (a.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!s.empty()) s += a[i] < 0 ? " - " : " + ";
    else if (a[i] < 0) s += "-";
    Rat c = a[i] < 0 ? Rat(-a[i]) : a[i];
    bool show_coeff = c != 1 || i == 0;
    if (show_coeff) s += c.str();
    if (i >= 1) {
      if (show_coeff) s += "*";
      s += "pi";
      if (i >= 2) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace qpi

// An element of the fraction field Q(pi), held as a reduced fraction of
// polynomials in pi. Elements of the local ring V, the rational functions
// with no pole at pi = 0, are exactly those whose reduced denominator has a
// nonzero constant term; those are normalized so denominator(0) = 1, and
// elements outside V carry a monic denominator instead. Either way the
// representation is unique, so equality is representational.
class DVRScalar {
 public:
  DVRScalar() : den_{Rat(1)} {}
  explicit DVRScalar(const Rat& c) : num_(qpi::constant(c)), den_{Rat(1)} {}
  DVRScalar(QPi num, QPi den) : num_(std::move(num)), den_(std::move(den)) {
    qpi::trim(num_);
    qpi::trim(den_);
    if (qpi::is_zero(den_)) throw config_error("scalar: zero denominator");
    normalize();
  }

  static DVRScalar pi() { return DVRScalar(QPi{Rat(0), Rat(1)}, QPi{Rat(1)}); }

  const QPi& num() const { return num_; }
  const QPi& den() const { return den_; }

  bool is_zero() const { return qpi::is_zero(num_); }

  // Membership in the local ring V.
  bool in_ring() const { return is_zero() || qpi::eval0(den_) != 0; }

  long valuation() const {
    if (is_zero()) throw config_error("scalar: valuation of zero");
    // num and den are coprime, so at most one of them vanishes at pi = 0
    return qpi::order(num_) - qpi::order(den_);
  }

  Rat residue() const {
    if (is_zero()) return Rat(0);
    if (!in_ring()) throw config_error("scalar: residue of an element with a pole");
    return qpi::eval0(num_) / qpi::eval0(den_);
  }

  bool operator==(const DVRScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const DVRScalar& o) const { return !(*this == o); }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string n = qpi::to_string(num_);
    if (qpi::deg(den_) == 0 && den_[0] == 1) return n;
    if (qpi::deg(num_) > 0) n = "(" + n + ")";
    return n + "/(" + qpi::to_string(den_) + ")";
  }

 private:
  void normalize() {
    if (qpi::is_zero(num_)) {
      den_ = QPi{Rat(1)};
      return;
    }
    QPi g = qpi::gcd(num_, den_);
    num_ = qpi::divmod(num_, g).first;
    den_ = qpi::divmod(den_, g).first;
    Rat unit = qpi::eval0(den_) != 0 ? qpi::eval0(den_) : den_.back();
    num_ = qpi::scale(num_, 1 / unit);
    den_ = qpi::scale(den_, 1 / unit);
  }

  QPi num_;
  QPi den_;
};

// Q(pi) as a field context object in the same shape as GF and QField, so
// the shared linear algebra runs over it unchanged.
class PiField {
 public:
  using Elem = DVRScalar;

  Elem zero() const { return DVRScalar(); }
  Elem one() const { return DVRScalar(Rat(1)); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  Elem from_int(const Int& k) const { return DVRScalar(Rat(k)); }
  Int characteristic() const { return 0; }

  Elem add(const Elem& a, const Elem& b) const {
    return Elem(qpi::add(qpi::mul(a.num(), b.den()), qpi::mul(b.num(), a.den())),
                qpi::mul(a.den(), b.den()));
  }
  Elem neg(const Elem& a) const { return Elem(qpi::neg(a.num()), a.den()); }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    return Elem(qpi::mul(a.num(), b.num()), qpi::mul(a.den(), b.den()));
  }
  Elem inv(const Elem& a) const {
    if (a.is_zero()) throw config_error("scalar: inverse of zero");
    return Elem(a.den(), a.num());
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, Int e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Elem acc = one();
    while (e > 0) {
      if ((e & 1) != 0) acc = mul(acc, a);
      a = mul(a, a);
      e >>= 1;
    }
    return acc;
  }
};

// Multiplication by pi^e, staying exact for negative e as well.
inline DVRScalar pi_shift(const PiField& k, const DVRScalar& a, long e) {
  DVRScalar p = DVRScalar::pi();
  return e >= 0 ? k.mul(a, k.pow(p, Int(e))) : k.div(a, k.pow(p, Int(-e)));
}

}  // namespace logbertini
