#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/gf.hpp"
#include "logbertini/monoid.hpp"
#include "logbertini/qfield.hpp"
#include "logbertini/ratfunc.hpp"

namespace logbertini {

// ---------------------------------------------------------------------------
// chart algebras A = k[P][w_1..w_s] / (chi^{h(q0)})
// ---------------------------------------------------------------------------

// One monomial c * chi^m * w^beta. The monoid exponent m is given in ambient
// coordinates of P and may be any member of P (negative entries are fine for
// invertible directions); the smooth-variable exponents are nonnegative.
template <class K>
struct MonomialTerm {
  typename K::Elem coeff;
  std::vector<Int> p_exponent;
  std::vector<long> w_exponent;
};

template <class K>
using PolyFunc = std::vector<MonomialTerm<K>>;

template <class K>
struct ChartAlgebra {
  K field;
  MonoidHom chart;  // Q -> P with Q monogenic
  long smooth_vars = 0;
  // the monomial killed by the log point (image of the Q-generator); inactive
  // for a trivial base log structure (zero generator)
  bool relation_active = false;
  std::vector<Int> relation;
  std::vector<Int> relation_certificate;
  bool log_smooth_declared = false;
};

template <class K>
ChartAlgebra<K> make_chart_algebra(K field, MonoidHom chart, long smooth_vars,
                                   bool declared_log_smooth) {
  if (chart.source.generator_count() != 1)
    throw config_error("chart algebra: the base log point must be monogenic");
  if (smooth_vars < 0) throw config_error("chart algebra: negative smooth variable count");
  ChartAlgebra<K> a{std::move(field), std::move(chart), smooth_vars};
  bool q0_zero = true;
  for (const Int& c : a.chart.source.generators[0])
    if (c != 0) q0_zero = false;
  if (!q0_zero) {
    a.relation = a.chart.generator_images[0];
    bool h_zero = true;
    for (const Int& c : a.relation)
      if (c != 0) h_zero = false;
    std::vector<Int> neg(a.relation.size());
    for (size_t j = 0; j < neg.size(); ++j) neg[j] = -a.relation[j];
    if (h_zero || monoid_contains(a.chart.target, neg).has_value())
      throw config_error(
          "chart algebra: the log point generator maps to a unit, so the fiber algebra is "
          "zero");
    a.relation_certificate = a.chart.image_certificates[0];
    a.relation_active = true;
  }
  if (declared_log_smooth) {
    KatoResult kr = kato_condition(a.chart, a.field.characteristic());
    if (!kr.smooth_ok)
      throw config_error("chart algebra: declared log smooth but the arithmetic criterion "
                         "fails for this characteristic");
    a.log_smooth_declared = true;
  }
  return a;
}

template <class K>
struct AlgebraPoint {
  std::vector<typename K::Elem> monoid_values;  // one value per P-generator
  std::vector<typename K::Elem> w_values;

  bool operator==(const AlgebraPoint&) const = default;
};

// Cached combinatorics of P used by point validation and enumeration: which
// generator subsets lie on faces, and the relation lattice within each.
struct FaceData {
  std::set<std::vector<long>> face_sets;
  std::map<std::vector<long>, IntMat> support_kernels;
};

inline FaceData build_face_data(const AffineMonoid& p) {
  FaceData fd;
  for (const Face& f : faces(p)) {
    fd.face_sets.insert(f.member_indices);
    std::vector<std::vector<Int>> rows;
    for (long i : f.member_indices) rows.push_back(p.generators[i]);
    fd.support_kernels.emplace(f.member_indices,
                               left_kernel(IntMat::from_rows(rows, p.ambient_rank)));
  }
  return fd;
}

// A generator assignment extends to a monoid hom P -> (k, *) exactly when
// the support is the generator set of a face and the nonzero values are
// multiplicative on the relation lattice of that support. Checking a
// relation basis over all generators would be too weak: with zero values a
// basis can hold while some other lattice relation fails (already for the
// submonoid of Z generated by 1, 1, 2 and values 0, 0, c).
template <class K>
bool point_invariants_hold(const ChartAlgebra<K>& a, const FaceData& fd,
                           const AlgebraPoint<K>& z, std::string* why = nullptr) {
  const K& k = a.field;
  const AffineMonoid& p = a.chart.target;
  if (static_cast<long>(z.monoid_values.size()) != p.generator_count() ||
      static_cast<long>(z.w_values.size()) != a.smooth_vars) {
    if (why) *why = "value count mismatch";
    return false;
  }
  std::vector<long> support;
  for (long i = 0; i < p.generator_count(); ++i)
    if (!k.is_zero(z.monoid_values[i])) support.push_back(i);
  auto it = fd.support_kernels.find(support);
  if (it == fd.support_kernels.end()) {
    if (why) *why = "support is not the generator set of a face";
    return false;
  }
  const IntMat& ker = it->second;
  for (long r = 0; r < ker.rows; ++r) {
    typename K::Elem lhs = k.one(), rhs = k.one();
    for (long j = 0; j < ker.cols; ++j) {
      const Int& c = ker.at(r, j);
      typename K::Elem v = z.monoid_values[support[j]];
      if (c > 0) lhs = k.mul(lhs, k.pow(v, c));
      if (c < 0) rhs = k.mul(rhs, k.pow(v, -c));
    }
    if (!k.eq(lhs, rhs)) {
      if (why) *why = "values are not multiplicative on the support relations";
      return false;
    }
  }
  if (a.relation_active) {
    typename K::Elem rel = k.one();
    for (size_t i = 0; i < a.relation_certificate.size(); ++i)
      rel = k.mul(rel, k.pow(z.monoid_values[i], a.relation_certificate[i]));
    if (!k.is_zero(rel)) {
      if (why) *why = "the chart monomial does not vanish";
      return false;
    }
  }
  return true;
}

// All rational points of A over its finite field, in lexicographic order of
// the packed element indices. The enumeration space is q^(generators + s).
inline std::vector<AlgebraPoint<GF>> enumerate_points(const ChartAlgebra<GF>& a,
                                                      long budget = 10000000) {
  const GF& k = a.field;
  const long gens = a.chart.target.generator_count();
  const long q = k.order();
  Int space = 1;
  for (long i = 0; i < gens + a.smooth_vars; ++i) {
    space *= q;
    if (space > budget) throw resource_error("enumerate_points: space exceeds the budget");
  }
  FaceData fd = build_face_data(a.chart.target);

  std::vector<AlgebraPoint<GF>> out;
  std::vector<GF::Elem> mv(gens, k.zero());
  auto emit_w = [&](const std::vector<GF::Elem>& base) {
    std::vector<GF::Elem> wv(a.smooth_vars, k.zero());
    while (true) {
      out.push_back(AlgebraPoint<GF>{base, wv});
      long j = 0;
      while (j < a.smooth_vars && wv[j] == static_cast<GF::Elem>(q - 1)) wv[j++] = 0;
      if (j == a.smooth_vars) break;
      ++wv[j];
    }
  };
  while (true) {
    AlgebraPoint<GF> cand{mv, {}};
    cand.w_values.assign(a.smooth_vars, k.zero());
    if (point_invariants_hold(a, fd, cand)) emit_w(mv);
    long j = 0;
    while (j < gens && mv[j] == static_cast<GF::Elem>(q - 1)) mv[j++] = 0;
    if (j == gens) break;
    ++mv[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// omega fibers
// ---------------------------------------------------------------------------

// Fiber of the relative log differentials at a point of the chart model:
// k tensor (P^gp/Q^gp) plus one slot per smooth variable. The quotient is
// presented through the Smith transform of Q^gp -> P^gp; an adapted slot
// with invariant d survives tensoring exactly when d = 0 (free) or the
// characteristic divides d.
template <class K>
struct OmegaFiber {
  CokernelInvariants cokernel;
  long smooth_vars = 0;
  long dimension = 0;
  IntMat gp_basis;              // groupification basis of P
  IntMat adapted;               // SNF column transform on gp-basis coordinates
  std::vector<long> surviving;  // adapted slots alive after tensoring with k
  std::vector<Int> slot_invariant;

  // coordinates of dlog(m) on the surviving slots, before scaling by the
  // monomial value
  std::vector<Int> dlog_coordinates(const std::vector<Int>& m) const {
    auto y = solve_left(m, gp_basis);
    if (!y) throw config_error("omega fiber: exponent outside P^gp");
    std::vector<Int> ya = vec_mat_mul(*y, adapted);
    std::vector<Int> out;
    for (long slot : surviving) out.push_back(ya[slot]);
    return out;
  }
};

template <class K>
OmegaFiber<K> omega_fiber(const ChartAlgebra<K>& a, const AlgebraPoint<K>&) {
  OmegaFiber<K> om;
  om.smooth_vars = a.smooth_vars;
  om.gp_basis = groupification(a.chart.target);
  IntMat b = hom_gp_in_bases(a.chart);
  SnfResult snf = smith_normal_form(b);
  om.adapted = snf.v;
  om.cokernel = cokernel_invariants(b);
  const Int p = a.field.characteristic();
  for (long i = 0; i < om.gp_basis.rows; ++i) {
    Int d = 0;
    if (i < std::min(b.rows, b.cols)) d = snf.d.at(i, i);
    om.slot_invariant.push_back(d);
    if (d == 0) {
      om.surviving.push_back(i);  // free slot
    } else if (d > 1 && p > 0 && d % p == 0) {
      om.surviving.push_back(i);  // torsion that the characteristic keeps alive
    }
  }
  om.dimension = static_cast<long>(om.surviving.size()) + om.smooth_vars;
  return om;
}

// ---------------------------------------------------------------------------
// evaluation and differentials
// ---------------------------------------------------------------------------

namespace detail {

template <class K>
typename K::Elem monomial_value(const K& k, const AffineMonoid& p,
                                const AlgebraPoint<K>& z, const std::vector<Int>& m) {
  auto cert = monoid_contains(p, m);
  if (!cert) throw config_error("evaluation: exponent is not a member of P");
  typename K::Elem v = k.one();
  for (size_t i = 0; i < cert->size(); ++i)
    v = k.mul(v, k.pow(z.monoid_values[i], (*cert)[i]));
  return v;
}

template <class K>
typename K::Elem w_power(const K& k, const AlgebraPoint<K>& z,
                         const std::vector<long>& beta) {
  typename K::Elem v = k.one();
  for (size_t j = 0; j < beta.size(); ++j)
    if (beta[j] > 0) v = k.mul(v, k.pow(z.w_values[j], Int(beta[j])));
  return v;
}

}  // namespace detail

template <class K>
typename K::Elem evaluate(const ChartAlgebra<K>& a, const PolyFunc<K>& f,
                          const AlgebraPoint<K>& z) {
  const K& k = a.field;
  typename K::Elem acc = k.zero();
  for (const MonomialTerm<K>& t : f) {
    typename K::Elem v = k.mul(t.coeff, detail::monomial_value(k, a.chart.target, z, t.p_exponent));
    v = k.mul(v, detail::w_power(k, z, t.w_exponent));
    acc = k.add(acc, v);
  }
  return acc;
}

// Fiber of df at z, by d(c chi^m w^beta) =
//   c chi^m w^beta dlog(m) + c chi^m sum_j beta_j w^{beta - e_j} dw_j.
// Coordinates: surviving dlog slots first, then dw_1..dw_s.
template <class K>
std::vector<typename K::Elem> differential_fiber(const ChartAlgebra<K>& a,
                                                 const OmegaFiber<K>& om, const PolyFunc<K>& f,
                                                 const AlgebraPoint<K>& z) {
  const K& k = a.field;
  const long nslots = static_cast<long>(om.surviving.size());
  std::vector<typename K::Elem> fiber(nslots + a.smooth_vars, k.zero());
  for (const MonomialTerm<K>& t : f) {
    if (static_cast<long>(t.w_exponent.size()) != a.smooth_vars)
      throw config_error("differential: smooth-variable exponent length mismatch");
    typename K::Elem mval =
        k.mul(t.coeff, detail::monomial_value(k, a.chart.target, z, t.p_exponent));
    typename K::Elem full = k.mul(mval, detail::w_power(k, z, t.w_exponent));
    std::vector<Int> dl = om.dlog_coordinates(t.p_exponent);
    for (long s = 0; s < nslots; ++s)
      fiber[s] = k.add(fiber[s], k.mul(full, k.from_int(dl[s])));
    for (long j = 0; j < a.smooth_vars; ++j) {
      if (t.w_exponent[j] == 0) continue;
      std::vector<long> beta = t.w_exponent;
      beta[j] -= 1;
      typename K::Elem dw = k.mul(mval, detail::w_power(k, z, beta));
      dw = k.mul(dw, k.from_int(Int(t.w_exponent[j])));
      fiber[nslots + j] = k.add(fiber[nslots + j], dw);
    }
  }
  return fiber;
}

// Jacobi criterion at a point of the hyperplane section
// u0 + sum u_i f_i = 0: the section is log smooth at z iff the fiber of
// sum u_i df_i does not vanish.
template <class K>
bool log_smooth_section_at_point(const ChartAlgebra<K>& a, const OmegaFiber<K>& om,
                                 const std::vector<PolyFunc<K>>& f_list,
                                 const std::vector<typename K::Elem>& u,
                                 const AlgebraPoint<K>& z) {
  const K& k = a.field;
  if (u.size() != f_list.size() + 1)
    throw config_error("section: need one coefficient more than functions");
  typename K::Elem val = u[0];
  for (size_t i = 0; i < f_list.size(); ++i)
    val = k.add(val, k.mul(u[i + 1], evaluate(a, f_list[i], z)));
  if (!k.is_zero(val)) throw config_error("section: z is not on the section");
  std::vector<typename K::Elem> total(om.surviving.size() + a.smooth_vars, k.zero());
  for (size_t i = 0; i < f_list.size(); ++i) {
    std::vector<typename K::Elem> fib = differential_fiber(a, om, f_list[i], z);
    for (size_t s = 0; s < total.size(); ++s)
      total[s] = k.add(total[s], k.mul(u[i + 1], fib[s]));
  }
  for (const auto& c : total)
    if (!k.is_zero(c)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// the section of Omega^1 -> omega^1 for an extension of log points
// ---------------------------------------------------------------------------

namespace detail {

inline long omega1_rank(const GF&) { return 0; }
inline long omega1_rank(const QField&) { return 0; }
inline long omega1_rank(const RatFuncField&) { return 1; }

inline std::vector<GF::Elem> dcoords(const GF&, GF::Elem) { return {}; }
inline std::vector<Rat> dcoords(const QField&, const Rat&) { return {}; }
inline std::vector<RatFuncField::Elem> dcoords(const RatFuncField& k,
                                               const RatFuncField::Elem& a) {
  return {k.derivative(a)};  // d(f) = f' du on the basis {du}
}

}  // namespace detail

// Section data for omega^1_{L/k} of a log point extension (k,Q) -> (L,P).
// omega^1 is presented on generators [Omega^1 basis | dlog of a gp-basis of
// P] modulo one relation per Q-generator; the derivation pair sends every
// (p, 1) to 0 and restricts to the identity on Omega^1. The section exists
// exactly when each relation maps to zero, which is where a transcendental
// unit part breaks the construction.
template <class K>
struct OmegaSectionReport {
  long omega1_dim = 0;
  long dlog_classes = 0;
  bool extension_valid = false;
  bool composite_identity = false;
  // value of the section on each presentation generator, in Omega^1 coords
  std::vector<std::vector<typename K::Elem>> section_values;
  // s applied to each Q-relation; all-zero rows certify well-definedness
  std::vector<std::vector<typename K::Elem>> relation_images;
};

template <class K>
OmegaSectionReport<K> omega_section_logpoint(const MonoidHom& qp,
                                             const std::vector<typename K::Elem>& unit_parts,
                                             const K& field) {
  if (unit_parts.size() != qp.generator_images.size())
    throw config_error("section: one unit part per base generator required");
  OmegaSectionReport<K> rep;
  rep.omega1_dim = detail::omega1_rank(field);
  IntMat bp = groupification(qp.target);
  rep.dlog_classes = bp.rows;

  // section on presentation generators: identity on the Omega^1 block,
  // zero on every dlog class (the derivation pair at (p_i, 1))
  for (long i = 0; i < rep.omega1_dim; ++i) {
    std::vector<typename K::Elem> row(rep.omega1_dim, field.zero());
    row[i] = field.one();
    rep.section_values.push_back(std::move(row));
  }
  for (long i = 0; i < rep.dlog_classes; ++i)
    rep.section_values.emplace_back(rep.omega1_dim, field.zero());

  // one relation per base generator: dlog(unit) + sum n_j dlog(p_j) = 0 in
  // omega^1; its image under s is unit^{-1} d(unit) + 0
  rep.extension_valid = true;
  for (size_t g = 0; g < unit_parts.size(); ++g) {
    if (field.is_zero(unit_parts[g]))
      throw config_error("section: unit part must be invertible");
    std::vector<typename K::Elem> img = detail::dcoords(field, unit_parts[g]);
    typename K::Elem inv_u = field.inv(unit_parts[g]);
    for (auto& c : img) c = field.mul(inv_u, c);
    for (const auto& c : img)
      if (!field.is_zero(c)) rep.extension_valid = false;
    rep.relation_images.push_back(std::move(img));
  }

  // composite Omega^1 -> omega^1 -> Omega^1 on the Omega^1 basis
  rep.composite_identity = true;
  for (long i = 0; i < rep.omega1_dim; ++i) {
    const std::vector<typename K::Elem>& row = rep.section_values[i];
    for (long j = 0; j < rep.omega1_dim; ++j) {
      bool want_one = i == j;
      bool is_one = field.eq(row[j], field.one());
      bool is_zero = field.is_zero(row[j]);
      if ((want_one && !is_one) || (!want_one && !is_zero)) rep.composite_identity = false;
    }
  }
  if (!rep.extension_valid) rep.composite_identity = false;
  return rep;
}

}  // namespace logbertini
