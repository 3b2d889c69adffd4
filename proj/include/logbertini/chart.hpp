#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logbertini/gf.hpp"
#include "logbertini/monoid.hpp"
#include "logbertini/qfield.hpp"
#include "logbertini/ratfunc.hpp"

namespace logbertini {

namespace detail {

// p-th root with "no root" meaning genuinely impossible in any separable
// extension. On a finite field Frobenius is bijective, so the root always
// exists; only the rational function field can refuse.
inline std::optional<GF::Elem> separable_pth_root(const GF& k, GF::Elem a) {
  Int e = 1;
  for (long i = 0; i + 1 < k.degree(); ++i) e *= k.p();
  return k.pow(a, e);  // inverse Frobenius: (a^{p^{m-1}})^p = a^{p^m} = a
}

inline std::optional<RatFuncField::Elem> separable_pth_root(const RatFuncField& k,
                                                            const RatFuncField::Elem& a) {
  return k.pth_root(a);
}

inline std::optional<Rat> separable_pth_root(const QField&, const Rat&) {
  throw std::logic_error("separable_pth_root: no characteristic-p part over Q");
}

}  // namespace detail

// Chart of a monogenic log point map through a sharp stalk monoid: the data
// recovered from the decomposition q = u * prod s(p_i)^{n_i}. On success the
// generator maps to the exponent vector itself (on the groupification basis
// of Pbar), the section having been twisted by v^{a_i}.
template <class K>
struct ChartSatz1 {
  bool success = false;
  Int n = 0;                            // gcd of the exponents
  std::vector<Int> bezout;              // a_i with sum a_i n_i = n
  typename K::Elem root;                // v with v^n = u
  std::vector<Int> image;               // chart image of the generator, ambient coords
  std::vector<Int> image_certificate;   // nonnegative combination witnessing image in Pbar
  std::string failure_reason;
};

// Construction following the tame-case argument: n = gcd(n_i) and a root
// v^n = u twist the section so the generator lands inside P. The one
// genuine obstruction is characteristic p dividing n while u has no p-th
// root (detected by the formal-derivative test over F_q(u)); a missing
// prime-to-p root merely means the coefficient field is too small and an
// extension would decide it.
template <class K>
ChartSatz1<K> construct_chart_satz1(const AffineMonoid& pbar, const std::vector<Int>& exponents,
                                    const typename K::Elem& u, const K& field) {
  IntMat basis = groupification(pbar);
  const long r = basis.rows;
  if (static_cast<long>(exponents.size()) != r)
    throw config_error("chart: exponent count must match the groupification rank");
  if (field.is_zero(u)) throw config_error("chart: the unit must be nonzero");
  if (!is_sharp(pbar)) throw config_error("chart: monoid is not sharp");

  ChartSatz1<K> out;
  out.image.assign(pbar.ambient_rank, Int(0));
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < pbar.ambient_rank; ++j)
      out.image[j] += exponents[i] * basis.at(i, j);
  auto cert = monoid_contains(pbar, out.image);
  if (!cert) throw config_error("chart: the generator image lies outside the monoid");
  out.image_certificate = *cert;

  Int n = 0;
  for (const Int& e : exponents) n = int_gcd(n, e);
  if (n == 0) throw config_error("chart: all exponents vanish; the image would be a unit");
  out.n = n;

  // split off the characteristic part of n and take its root first
  const Int p = field.characteristic();
  typename K::Elem v = u;
  Int rest = n;
  if (p > 0) {
    while (rest % p == 0) {
      auto rt = detail::separable_pth_root(field, v);
      if (!rt) {
        out.failure_reason =
            "gcd of the exponents is divisible by the characteristic and the unit has no p-th "
            "root";
        return out;
      }
      v = *rt;
      rest /= p;
    }
  }
  auto rt = field.nth_root(v, rest);
  if (!rt)
    throw unsupported_field_error(
        "chart: no n-th root of the unit in the given field; the field is too small to decide, "
        "extend it and retry");
  v = *rt;
  out.root = v;

  // Bezout coefficients across the nonzero exponents
  out.bezout.assign(r, Int(0));
  Int g = 0;
  long first = -1;
  for (long i = 0; i < r; ++i) {
    if (exponents[i] == 0) continue;
    if (first < 0) {
      first = i;
      g = exponents[i];
      out.bezout[i] = 1;
    } else {
      ExtGcd e = ext_gcd(g, exponents[i]);
      for (long j = 0; j < i; ++j) out.bezout[j] *= e.x;
      out.bezout[i] = e.y;
      g = e.g;
    }
  }
  if (g < 0) {
    // gcd chain can end negative only through the seed; flip everything
    for (long j = 0; j < r; ++j) out.bezout[j] = -out.bezout[j];
    g = -g;
  }
  if (g != n) throw std::logic_error("chart: gcd chain disagrees with direct gcd");

  out.success = true;
  return out;
}

}  // namespace logbertini
