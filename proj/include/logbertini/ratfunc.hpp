#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "logbertini/gf.hpp"
#include "logbertini/poly.hpp"

namespace logbertini {

// The rational function field F_q(u) in one transcendental over a finite
// base. Elements are reduced fractions num/den with den monic; this is the
// minimal function-field support the toolkit needs: arithmetic, the formal
// derivative, and p-power root tests (the obstruction that makes a
// transcendental unit fail to be a p-th power).
class RatFuncField {
 public:
  struct Elem {
    Poly<GF> num, den;
  };

  explicit RatFuncField(GF base) : base_(std::move(base)) {}

  const GF& base() const { return base_; }
  Int characteristic() const { return base_.characteristic(); }

  Elem zero() const { return make(Poly<GF>{}, poly_const(base_, base_.one())); }
  Elem one() const {
    return make(poly_const(base_, base_.one()), poly_const(base_, base_.one()));
  }
  Elem transcendental() const {
    return make(poly_x(base_), poly_const(base_, base_.one()));
  }
  Elem from_int(const Int& k) const {
    return make(poly_const(base_, base_.from_int(k)), poly_const(base_, base_.one()));
  }
  Elem from_base(GF::Elem a) const {
    return make(poly_const(base_, a), poly_const(base_, base_.one()));
  }
  Elem from_fraction(Poly<GF> num, Poly<GF> den) const {
    if (poly_is_zero(den)) throw std::domain_error("RatFuncField: zero denominator");
    return reduce(std::move(num), std::move(den));
  }

  bool is_zero(const Elem& a) const { return poly_is_zero(a.num); }
  bool eq(const Elem& a, const Elem& b) const {
    return poly_eq(base_, a.num, b.num) && poly_eq(base_, a.den, b.den);
  }

  Elem add(const Elem& a, const Elem& b) const {
    Poly<GF> n = poly_add(base_, poly_mul(base_, a.num, b.den),
                          poly_mul(base_, b.num, a.den));
    return reduce(std::move(n), poly_mul(base_, a.den, b.den));
  }
  Elem neg(const Elem& a) const { return {poly_neg(base_, a.num), a.den}; }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    return reduce(poly_mul(base_, a.num, b.num), poly_mul(base_, a.den, b.den));
  }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("RatFuncField: inverse of zero");
    return reduce(a.den, a.num);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, Int e) const {
    if (e < 0) { a = inv(a); e = -e; }
    Elem acc = one();
    while (e > 0) {
      if ((e & 1) != 0) acc = mul(acc, a);
      a = mul(a, a);
      e >>= 1;
    }
    return acc;
  }

  bool is_constant(const Elem& a) const {
    return poly_degree(a.num) <= 0 && poly_degree(a.den) == 0;
  }

  // quotient-rule derivative with respect to the transcendental
  Elem derivative(const Elem& a) const {
    Poly<GF> n = poly_sub(base_, poly_mul(base_, poly_derivative(base_, a.num), a.den),
                          poly_mul(base_, a.num, poly_derivative(base_, a.den)));
    return reduce(std::move(n), poly_mul(base_, a.den, a.den));
  }

  // A reduced fraction is a p-th power iff numerator and denominator both
  // are (coprimality in the UFD F_q[u]); a polynomial is a p-th power iff
  // its formal derivative vanishes, since the surviving coefficients then
  // sit on exponents divisible by p and F_q is perfect.
  bool is_pth_power(const Elem& a) const {
    if (is_zero(a)) return true;
    return poly_is_zero(poly_derivative(base_, a.num)) &&
           poly_is_zero(poly_derivative(base_, a.den));
  }

  std::optional<Elem> pth_root(const Elem& a) const {
    if (is_zero(a)) return zero();
    auto rn = poly_pth_root(a.num);
    auto rd = poly_pth_root(a.den);
    if (!rn || !rd) return std::nullopt;
    return reduce(std::move(*rn), std::move(*rd));
  }

  // n-th roots: the p-power part of n is always decidable (iterated p-th
  // roots); a leftover prime-to-p part is delegated to the base field for
  // constants and is out of scope for genuinely rational functions.
  std::optional<Elem> nth_root(const Elem& u, const Int& n) const {
    if (n <= 0) throw config_error("RatFuncField: root order must be positive");
    const Int p = base_.characteristic();
    Int rest = n;
    Elem cur = u;
    while (rest % p == 0) {
      auto r = pth_root(cur);
      if (!r) return std::nullopt;
      cur = *r;
      rest /= p;
    }
    if (rest == 1) return cur;
    if (is_constant(cur)) {
      GF::Elem c = poly_is_zero(cur.num) ? base_.zero() : cur.num.c[0];
      auto r = base_.nth_root(c, rest);
      if (!r) return std::nullopt;
      return from_base(*r);
    }
    throw unsupported_field_error(
        "prime-to-p root existence undecided for a non-constant rational function");
  }

  std::string to_string(const Elem& a) const {
    std::string n = poly_to_string(base_, a.num, "u");
    if (poly_degree(a.den) == 0 && base_.eq(a.den.c[0], base_.one())) return n;
    return "(" + n + ")/(" + poly_to_string(base_, a.den, "u") + ")";
  }

 private:
  GF base_;

  Elem make(Poly<GF> n, Poly<GF> d) const { return {std::move(n), std::move(d)}; }

  Elem reduce(Poly<GF> n, Poly<GF> d) const {
    if (poly_is_zero(d)) throw std::domain_error("RatFuncField: zero denominator");
    if (poly_is_zero(n)) return make({}, poly_const(base_, base_.one()));
    Poly<GF> g = poly_gcd(base_, n, d);
    if (poly_degree(g) > 0) {
      n = poly_divmod(base_, n, g).first;
      d = poly_divmod(base_, d, g).first;
    }
    GF::Elem lead_inv = base_.inv(d.c.back());
    return make(poly_scale(base_, lead_inv, n), poly_scale(base_, lead_inv, d));
  }

  std::optional<Poly<GF>> poly_pth_root(const Poly<GF>& f) const {
    if (!poly_is_zero(poly_derivative(base_, f))) return std::nullopt;
    const long p = base_.p();
    const long mexp = base_.degree() > 0 ? base_.degree() - 1 : 0;
    Int frob = 1;
    for (long i = 0; i < mexp; ++i) frob *= p;  // c -> c^{p^{m-1}} inverts Frobenius
    Poly<GF> out;
    if (poly_degree(f) >= 0) out.c.resize(poly_degree(f) / p + 1, base_.zero());
    for (long i = 0; i <= poly_degree(f); ++i) {
      if (base_.is_zero(f.c[i])) continue;
      if (i % p != 0) return std::nullopt;
      out.c[i / p] = base_.pow(f.c[i], frob);
    }
    return poly_trim(base_, std::move(out));
  }
};

}  // namespace logbertini
