#pragma once

#include <map>
#include <utility>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Dense univariate polynomials over a field context K, low degree first.
template <class K>
using UPoly = std::vector<typename K::Elem>;

namespace upoly {

template <class K>
void trim(const K& k, UPoly<K>& p) {
  while (!p.empty() && k.is_zero(p.back())) p.pop_back();
}

// deg and is_zero deduce on the element type because K sits in a
// non-deduced context inside the UPoly alias
template <class E>
long deg(const std::vector<E>& p) {
  return static_cast<long>(p.size()) - 1;
}

template <class E>
bool is_zero(const std::vector<E>& p) {
  return p.empty();
}

template <class K>
UPoly<K> add(const K& k, const UPoly<K>& a, const UPoly<K>& b) {
  UPoly<K> out(std::max(a.size(), b.size()), k.zero());
  for (size_t i = 0; i < a.size(); ++i) out[i] = k.add(out[i], a[i]);
  for (size_t i = 0; i < b.size(); ++i) out[i] = k.add(out[i], b[i]);
  trim(k, out);
  return out;
}

template <class K>
UPoly<K> neg(const K& k, const UPoly<K>& a) {
  UPoly<K> out = a;
  for (auto& c : out) c = k.neg(c);
  return out;
}

template <class K>
UPoly<K> sub(const K& k, const UPoly<K>& a, const UPoly<K>& b) {
  return add(k, a, neg(k, b));
}

template <class K>
UPoly<K> mul(const K& k, const UPoly<K>& a, const UPoly<K>& b) {
  if (a.empty() || b.empty()) return {};
  UPoly<K> out(a.size() + b.size() - 1, k.zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = k.add(out[i + j], k.mul(a[i], b[j]));
  trim(k, out);
  return out;
}

template <class K>
typename K::Elem eval(const K& k, const UPoly<K>& a, const typename K::Elem& x) {
  typename K::Elem acc = k.zero();
  for (size_t i = a.size(); i-- > 0;) acc = k.add(k.mul(acc, x), a[i]);
  return acc;
}

template <class K>
UPoly<K> derivative(const K& k, const UPoly<K>& a) {
  UPoly<K> out;
  for (size_t i = 1; i < a.size(); ++i) out.push_back(k.mul(a[i], k.from_int(Int(i))));
  trim(k, out);
  return out;
}

template <class K>
std::pair<UPoly<K>, UPoly<K>> divmod(const K& k, const UPoly<K>& a, const UPoly<K>& b) {
  if (b.empty()) throw config_error("upoly: division by zero");
  UPoly<K> r = a, q(a.size(), k.zero());
  const long db = deg(b);
  while (deg(r) >= db) {
    const long shift = deg(r) - db;
    typename K::Elem c = k.div(r.back(), b.back());
    q[shift] = k.add(q[shift], c);
    for (long i = 0; i <= db; ++i)
      r[shift + i] = k.sub(r[shift + i], k.mul(c, b[i]));
    trim(k, r);
  }
  trim(k, q);
  return {q, r};
}

template <class K>
UPoly<K> gcd(const K& k, UPoly<K> a, UPoly<K> b) {
  while (!b.empty()) {
    UPoly<K> r = divmod(k, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    typename K::Elem lead = a.back();
    for (auto& c : a) c = k.div(c, lead);
  }
  return a;
}

// A nonzero polynomial is squarefree over the field when it shares no
// factor with its derivative; constants count as squarefree.
template <class K>
bool squarefree(const K& k, const UPoly<K>& a) {
  if (deg(a) <= 0) return true;
  return deg(gcd(k, a, derivative(k, a))) == 0;
}

}  // namespace upoly

// Sparse multivariate polynomials over K with a fixed variable count.
// Exponent vectors map to nonzero coefficients.
template <class K>
struct MPoly {
  long vars = 0;
  std::map<std::vector<long>, typename K::Elem> terms;
};

namespace mpoly {

template <class K>
MPoly<K> zero(long vars) {
  return MPoly<K>{vars, {}};
}

template <class K>
MPoly<K> term(const K& k, long vars, const typename K::Elem& c, std::vector<long> exps) {
  if (static_cast<long>(exps.size()) != vars) throw config_error("mpoly: exponent arity");
  MPoly<K> out{vars, {}};
  if (!k.is_zero(c)) out.terms.emplace(std::move(exps), c);
  return out;
}

template <class K>
void add_term(const K& k, MPoly<K>& m, const std::vector<long>& exps,
              const typename K::Elem& c) {
  auto it = m.terms.find(exps);
  if (it == m.terms.end()) {
    if (!k.is_zero(c)) m.terms.emplace(exps, c);
    return;
  }
  it->second = k.add(it->second, c);
  if (k.is_zero(it->second)) m.terms.erase(it);
}

template <class K>
MPoly<K> add(const K& k, const MPoly<K>& a, const MPoly<K>& b) {
  if (a.vars != b.vars) throw config_error("mpoly: variable count mismatch");
  MPoly<K> out = a;
  for (const auto& [e, c] : b.terms) add_term(k, out, e, c);
  return out;
}

template <class K>
MPoly<K> neg(const K& k, const MPoly<K>& a) {
  MPoly<K> out = a;
  for (auto& [e, c] : out.terms) c = k.neg(c);
  return out;
}

template <class K>
MPoly<K> sub(const K& k, const MPoly<K>& a, const MPoly<K>& b) {
  return add(k, a, neg(k, b));
}

template <class K>
MPoly<K> mul(const K& k, const MPoly<K>& a, const MPoly<K>& b) {
  if (a.vars != b.vars) throw config_error("mpoly: variable count mismatch");
  MPoly<K> out{a.vars, {}};
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      std::vector<long> e(a.vars);
      for (long i = 0; i < a.vars; ++i) e[i] = ea[i] + eb[i];
      add_term(k, out, e, k.mul(ca, cb));
    }
  return out;
}

template <class K>
MPoly<K> scale(const K& k, const MPoly<K>& a, const typename K::Elem& c) {
  MPoly<K> out{a.vars, {}};
  if (k.is_zero(c)) return out;
  for (const auto& [e, cc] : a.terms) out.terms.emplace(e, k.mul(cc, c));
  return out;
}

template <class K>
bool is_zero(const MPoly<K>& a) {
  return a.terms.empty();
}

template <class K>
bool eq(const K& k, const MPoly<K>& a, const MPoly<K>& b) {
  return is_zero(sub(k, a, b));
}

// Substitutes a constant for one variable, keeping the arity.
template <class K>
MPoly<K> substitute(const K& k, const MPoly<K>& a, long var,
                    const typename K::Elem& value) {
  MPoly<K> out{a.vars, {}};
  for (const auto& [e, c] : a.terms) {
    typename K::Elem coeff = k.mul(c, k.pow(value, Int(e[var])));
    std::vector<long> ne = e;
    ne[var] = 0;
    add_term(k, out, ne, coeff);
  }
  return out;
}

template <class K>
long degree_in(const MPoly<K>& a, long var) {
  long d = -1;
  for (const auto& [e, c] : a.terms) d = std::max(d, e[var]);
  return d;
}

// Coefficients of the powers of one variable, as polynomials in the rest.
template <class K>
std::vector<MPoly<K>> collect(const K& k, const MPoly<K>& a, long var) {
  std::vector<MPoly<K>> out(static_cast<size_t>(std::max(degree_in(a, var), -1L) + 1),
                            MPoly<K>{a.vars, {}});
  for (const auto& [e, c] : a.terms) {
    std::vector<long> ne = e;
    ne[var] = 0;
    add_term(k, out[e[var]], ne, c);
  }
  return out;
}

// Converts a polynomial that only involves one variable to dense form.
template <class K>
UPoly<K> to_upoly(const K& k, const MPoly<K>& a, long var) {
  UPoly<K> out(static_cast<size_t>(std::max(degree_in(a, var), -1L) + 1), k.zero());
  for (const auto& [e, c] : a.terms) {
    for (long i = 0; i < a.vars; ++i)
      if (i != var && e[i] != 0)
        throw config_error("mpoly: polynomial involves more than the requested variable");
    out[e[var]] = c;
  }
  upoly::trim(k, out);
  return out;
}

template <class K>
typename K::Elem eval(const K& k, const MPoly<K>& a,
                      const std::vector<typename K::Elem>& point) {
  if (static_cast<long>(point.size()) != a.vars) throw config_error("mpoly: point arity");
  typename K::Elem acc = k.zero();
  for (const auto& [e, c] : a.terms) {
    typename K::Elem t = c;
    for (long i = 0; i < a.vars; ++i) t = k.mul(t, k.pow(point[i], Int(e[i])));
    acc = k.add(acc, t);
  }
  return acc;
}

}  // namespace mpoly

// Sylvester resultant of two dense polynomials whose coefficients are
// themselves univariate polynomials over K. The inputs carry their true
// degrees (nonzero top coefficient); the determinant is expanded by minors,
// which is fine at the handful-of-rows sizes this toolkit meets.
template <class K>
UPoly<K> sylvester_resultant(const K& k, const std::vector<UPoly<K>>& f,
                             const std::vector<UPoly<K>>& g) {
  const long m = static_cast<long>(f.size()) - 1;
  const long l = static_cast<long>(g.size()) - 1;
  if (m < 1 || l < 1) throw config_error("resultant: both degrees must be positive");
  if (upoly::is_zero(f.back()) || upoly::is_zero(g.back()))
    throw config_error("resultant: top coefficient vanishes");
  const long n = m + l;
  std::vector<std::vector<UPoly<K>>> mat(n, std::vector<UPoly<K>>(n));
  for (long i = 0; i < l; ++i)
    for (long j = 0; j <= m; ++j) mat[i][i + j] = f[m - j];
  for (long i = 0; i < m; ++i)
    for (long j = 0; j <= l; ++j) mat[l + i][i + j] = g[l - j];

  std::vector<long> cols(n);
  for (long j = 0; j < n; ++j) cols[j] = j;
  auto det = [&](auto&& self, long row, std::vector<long>& cs) -> UPoly<K> {
    if (cs.empty()) return UPoly<K>{k.one()};
    UPoly<K> acc;
    for (size_t ci = 0; ci < cs.size(); ++ci) {
      const UPoly<K>& entry = mat[row][cs[ci]];
      if (upoly::is_zero(entry)) continue;
      std::vector<long> rest;
      for (size_t cj = 0; cj < cs.size(); ++cj)
        if (cj != ci) rest.push_back(cs[cj]);
      UPoly<K> minor = self(self, row + 1, rest);
      UPoly<K> contrib = upoly::mul(k, entry, minor);
      acc = ci % 2 == 0 ? upoly::add(k, acc, contrib) : upoly::sub(k, acc, contrib);
    }
    return acc;
  };
  return det(det, 0, cols);
}

}  // namespace logbertini
