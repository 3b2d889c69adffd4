#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Dense univariate polynomial over a field context object K. Coefficient i
// multiplies x^i; the vector carries no trailing zeros, and the zero
// polynomial is the empty vector (degree -1).
template <class K>
struct Poly {
  std::vector<typename K::Elem> c;
};

template <class K>
Poly<K> poly_trim(const K& k, Poly<K> p) {
  while (!p.c.empty() && k.is_zero(p.c.back())) p.c.pop_back();
  return p;
}

template <class K>
long poly_degree(const Poly<K>& p) {
  return static_cast<long>(p.c.size()) - 1;
}

template <class K>
bool poly_is_zero(const Poly<K>& p) {
  return p.c.empty();
}

template <class K>
Poly<K> poly_const(const K& k, typename K::Elem a) {
  if (k.is_zero(a)) return {};
  return {{a}};
}

template <class K>
Poly<K> poly_x(const K& k) {
  return {{k.zero(), k.one()}};
}

template <class K>
bool poly_eq(const K& k, const Poly<K>& a, const Poly<K>& b) {
  if (a.c.size() != b.c.size()) return false;
  for (size_t i = 0; i < a.c.size(); ++i)
    if (!k.eq(a.c[i], b.c[i])) return false;
  return true;
}

template <class K>
Poly<K> poly_add(const K& k, const Poly<K>& a, const Poly<K>& b) {
  Poly<K> out;
  out.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] = k.add(out.c[i], b.c[i]);
  return poly_trim(k, std::move(out));
}

template <class K>
Poly<K> poly_neg(const K& k, Poly<K> a) {
  for (auto& v : a.c) v = k.neg(v);
  return a;
}

template <class K>
Poly<K> poly_sub(const K& k, const Poly<K>& a, const Poly<K>& b) {
  return poly_add(k, a, poly_neg(k, b));
}

template <class K>
Poly<K> poly_mul(const K& k, const Poly<K>& a, const Poly<K>& b) {
  if (a.c.empty() || b.c.empty()) return {};
  Poly<K> out;
  out.c.resize(a.c.size() + b.c.size() - 1, k.zero());
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (k.is_zero(a.c[i])) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      out.c[i + j] = k.add(out.c[i + j], k.mul(a.c[i], b.c[j]));
  }
  return poly_trim(k, std::move(out));
}

template <class K>
Poly<K> poly_scale(const K& k, typename K::Elem s, const Poly<K>& a) {
  if (k.is_zero(s)) return {};
  Poly<K> out = a;
  for (auto& v : out.c) v = k.mul(s, v);
  return out;
}

// quotient and remainder; divisor must be nonzero
template <class K>
std::pair<Poly<K>, Poly<K>> poly_divmod(const K& k, Poly<K> a, const Poly<K>& b) {
  if (b.c.empty()) throw std::domain_error("poly_divmod: division by zero polynomial");
  const long db = poly_degree(b);
  const typename K::Elem lead_inv = k.inv(b.c.back());
  Poly<K> q;
  if (poly_degree(a) >= db) q.c.resize(a.c.size() - db, k.zero());
  while (poly_degree(a) >= db) {
    const long da = poly_degree(a);
    typename K::Elem f = k.mul(a.c.back(), lead_inv);
    q.c[da - db] = f;
    for (long j = 0; j <= db; ++j)
      a.c[da - db + j] = k.sub(a.c[da - db + j], k.mul(f, b.c[j]));
    a = poly_trim(k, std::move(a));
  }
  return {poly_trim(k, std::move(q)), std::move(a)};
}

template <class K>
Poly<K> poly_monic(const K& k, const Poly<K>& a) {
  if (a.c.empty()) return a;
  return poly_scale(k, k.inv(a.c.back()), a);
}

// monic gcd (zero if both inputs are zero)
template <class K>
Poly<K> poly_gcd(const K& k, Poly<K> a, Poly<K> b) {
  while (!b.c.empty()) {
    Poly<K> r = poly_divmod(k, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(k, a);
}

template <class K>
Poly<K> poly_derivative(const K& k, const Poly<K>& a) {
  Poly<K> out;
  if (a.c.size() <= 1) return out;
  out.c.resize(a.c.size() - 1, k.zero());
  for (size_t i = 1; i < a.c.size(); ++i)
    out.c[i - 1] = k.mul(k.from_int(Int(static_cast<long>(i))), a.c[i]);
  return poly_trim(k, std::move(out));
}

template <class K>
typename K::Elem poly_eval(const K& k, const Poly<K>& a, typename K::Elem x) {
  typename K::Elem acc = k.zero();
  for (size_t i = a.c.size(); i-- > 0;) acc = k.add(k.mul(acc, x), a.c[i]);
  return acc;
}

template <class K>
Poly<K> poly_pow(const K& k, Poly<K> base, long e) {
  Poly<K> acc = poly_const(k, k.one());
  while (e > 0) {
    if (e & 1) acc = poly_mul(k, acc, base);
    base = poly_mul(k, base, base);
    e >>= 1;
  }
  return acc;
}

template <class K>
std::string poly_to_string(const K& k, const Poly<K>& a, const std::string& var) {
  if (a.c.empty()) return "0";
  std::string s;
  for (size_t i = a.c.size(); i-- > 0;) {
    if (k.is_zero(a.c[i])) continue;
    if (!s.empty()) s += " + ";
    if (i == 0 || !k.eq(a.c[i], k.one())) s += k.to_string(a.c[i]);
    if (i > 0) {
      if (!k.eq(a.c[i], k.one())) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace logbertini
