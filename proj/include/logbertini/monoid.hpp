#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/intmat.hpp"
#include "logbertini/linalg.hpp"
#include "logbertini/qfield.hpp"

namespace logbertini {

// A fine monoid presented as the set of nonnegative integer combinations of
// finitely many lattice vectors. Working inside a fixed lattice keeps
// integrality automatic and makes groupification a Hermite basis.
struct AffineMonoid {
  long ambient_rank = 0;
  std::vector<std::vector<Int>> generators;

  IntMat generator_matrix() const {
    return IntMat::from_rows(generators, ambient_rank);
  }

  long generator_count() const { return static_cast<long>(generators.size()); }
};

// Hermite basis (rows) of the sublattice generated by the generators.
inline IntMat groupification(const AffineMonoid& m) {
  return row_lattice_basis(m.generator_matrix());
}

// ---------------------------------------------------------------------------
// membership
// ---------------------------------------------------------------------------

// Does x lie in the monoid? Returns a nonnegative-combination certificate c
// with sum c_i g_i = x when it does.
//
// Search: minimal nonnegative solutions of sum c_i g_i - t x = 0 over
// N^{s+1}. Any solution with t = 1 decomposes into minimal ones whose
// t-components sum to 1, so x is a member iff a minimal solution has t = 1;
// nodes grow one coordinate at a time, which lets us cap t at 1 outright.
// Branching follows Contejean and Devie: extend y by e_i only while the
// current value moves against the column, <v(y), col_i> < 0.
inline std::optional<std::vector<Int>> monoid_contains(const AffineMonoid& m,
                                                       const std::vector<Int>& x,
                                                       long max_nodes = 200000) {
  const long s = m.generator_count();
  const long n = m.ambient_rank;
  if (static_cast<long>(x.size()) != n) throw config_error("membership: dimension mismatch");
  // quick lattice rejection
  if (!in_row_lattice(x, m.generator_matrix())) return std::nullopt;

  // columns of the homogeneous system: g_0..g_{s-1}, then -x
  std::vector<std::vector<Int>> col(s + 1);
  for (long i = 0; i < s; ++i) col[i] = m.generators[i];
  col[s].resize(n);
  for (long j = 0; j < n; ++j) col[s][j] = -x[j];

  auto dot = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
    Int d = 0;
    for (long j = 0; j < n; ++j) d += a[j] * b[j];
    return d;
  };

  struct Node {
    std::vector<Int> coeff;  // length s+1
    std::vector<Int> value;  // length n
  };

  std::vector<Node> frontier;
  std::set<std::vector<Int>> seen;
  std::vector<std::vector<Int>> minimal;  // found minimal solutions (t = 0 ones matter)

  for (long i = 0; i <= s; ++i) {
    Node nd;
    nd.coeff.assign(s + 1, Int(0));
    nd.coeff[i] = 1;
    nd.value = col[i];
    seen.insert(nd.coeff);
    frontier.push_back(std::move(nd));
  }

  auto dominated = [&](const std::vector<Int>& c) {
    for (const auto& sol : minimal) {
      bool ge = true;
      for (long i = 0; i <= s; ++i)
        if (c[i] < sol[i]) { ge = false; break; }
      if (ge) return true;
    }
    return false;
  };

  long explored = 0;
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (Node& nd : frontier) {
      if (++explored > max_nodes)
        throw resource_error("membership: search budget exceeded");
      bool zero = true;
      for (const Int& v : nd.value)
        if (v != 0) { zero = false; break; }
      if (zero) {
        if (nd.coeff[s] == 1)
          return std::vector<Int>(nd.coeff.begin(), nd.coeff.begin() + s);
        minimal.push_back(nd.coeff);
        continue;
      }
      for (long i = 0; i <= s; ++i) {
        if (i == s && nd.coeff[s] >= 1) continue;  // cap t at 1
        if (dot(nd.value, col[i]) >= 0) continue;
        Node child;
        child.coeff = nd.coeff;
        child.coeff[i] += 1;
        if (seen.count(child.coeff) || dominated(child.coeff)) continue;
        child.value = nd.value;
        for (long j = 0; j < n; ++j) child.value[j] += col[i][j];
        seen.insert(child.coeff);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// faces
// ---------------------------------------------------------------------------

struct Face {
  std::vector<long> member_indices;  // sorted generator indices lying on the face
  IntMat lattice;                    // Hermite basis of F^gp in ambient coordinates

  bool operator==(const Face& o) const {
    return member_indices == o.member_indices && lattice == o.lattice;
  }
};

namespace detail {

// Feasibility of { a_j . psi >= rhs_j } by Fourier-Motzkin elimination,
// exact over Q. Row count is capped to keep pathological growth visible.
inline bool fm_feasible(std::vector<std::pair<std::vector<Rat>, Rat>> rows, long vars) {
  for (long v = 0; v < vars; ++v) {
    std::vector<std::pair<std::vector<Rat>, Rat>> pos, neg, zer;
    for (auto& r : rows) {
      if (r.first[v] > 0) pos.push_back(std::move(r));
      else if (r.first[v] < 0) neg.push_back(std::move(r));
      else zer.push_back(std::move(r));
    }
    rows = std::move(zer);
    if (pos.empty() || neg.empty()) continue;  // psi_v escapes to +-infinity
    for (const auto& p : pos)
      for (const auto& nrow : neg) {
        // scale so the v-coefficients cancel
        Rat sp = 1 / p.first[v], sn = -1 / nrow.first[v];
        std::pair<std::vector<Rat>, Rat> combo;
        combo.first.resize(vars);
        for (long j = 0; j < vars; ++j)
          combo.first[j] = sp * p.first[j] + sn * nrow.first[j];
        combo.second = sp * p.second + sn * nrow.second;
        rows.push_back(std::move(combo));
      }
    if (static_cast<long>(rows.size()) > 20000)
      throw resource_error("face feasibility: Fourier-Motzkin row budget exceeded");
  }
  for (const auto& r : rows)
    if (r.second > 0) return false;  // 0 >= rhs with rhs positive
  return true;
}

// Is there a supporting functional vanishing exactly on the generators in S?
inline bool face_subset_feasible(const AffineMonoid& m, const std::vector<bool>& in_s) {
  const long n = m.ambient_rank;
  QField Q;
  FMat<QField> eq;
  for (long i = 0; i < m.generator_count(); ++i)
    if (in_s[i]) {
      std::vector<Rat> row(n);
      for (long j = 0; j < n; ++j) row[j] = Rat(m.generators[i][j]);
      eq.push_back(std::move(row));
    }
  // parameterize phi = sum psi_k N_k on the solution space of the equalities
  FMat<QField> basis;
  if (eq.empty()) {
    for (long j = 0; j < n; ++j) {
      std::vector<Rat> e(n, Rat(0));
      e[j] = 1;
      basis.push_back(std::move(e));
    }
  } else {
    basis = nullspace(Q, eq, n);
  }
  const long d = static_cast<long>(basis.size());
  std::vector<std::pair<std::vector<Rat>, Rat>> rows;
  for (long i = 0; i < m.generator_count(); ++i) {
    if (in_s[i]) continue;
    std::vector<Rat> a(d);
    for (long k = 0; k < d; ++k) {
      Rat acc = 0;
      for (long j = 0; j < n; ++j) acc += Rat(m.generators[i][j]) * basis[k][j];
      a[k] = acc;
    }
    rows.emplace_back(std::move(a), Rat(1));
  }
  return fm_feasible(std::move(rows), d);
}

}  // namespace detail

inline Face make_face(const AffineMonoid& m, std::vector<long> indices) {
  std::sort(indices.begin(), indices.end());
  std::vector<std::vector<Int>> rows;
  for (long i : indices) rows.push_back(m.generators[i]);
  return Face{std::move(indices), row_lattice_basis(IntMat::from_rows(rows, m.ambient_rank))};
}

inline bool is_face(const AffineMonoid& m, const Face& f) {
  std::vector<bool> in_s(m.generator_count(), false);
  for (long i : f.member_indices) {
    if (i < 0 || i >= m.generator_count()) return false;
    in_s[i] = true;
  }
  return detail::face_subset_feasible(m, in_s);
}

// All faces, as subsets of generators cut out by supporting hyperplanes.
inline std::vector<Face> faces(const AffineMonoid& m) {
  if (m.ambient_rank > 6) throw resource_error("faces: ambient rank above desk scale");
  const long s = m.generator_count();
  if (s > 16) throw resource_error("faces: too many generators for subset enumeration");
  std::vector<Face> out;
  std::set<std::vector<long>> seen_members;
  for (long mask = 0; mask < (1L << s); ++mask) {
    std::vector<bool> in_s(s, false);
    std::vector<long> idx;
    for (long i = 0; i < s; ++i)
      if (mask & (1L << i)) { in_s[i] = true; idx.push_back(i); }
    if (!detail::face_subset_feasible(m, in_s)) continue;
    if (!seen_members.insert(idx).second) continue;
    out.push_back(make_face(m, idx));
  }
  return out;
}

// M cap -M, found directly: generator i is a unit iff -g_i is a member.
// Every unit decomposes into unit generators, so these generate the unit
// group, and a submonoid that is a group has Z-span equal to its N-span.
inline Face units_face(const AffineMonoid& m) {
  std::vector<long> idx;
  for (long i = 0; i < m.generator_count(); ++i) {
    std::vector<Int> neg(m.ambient_rank);
    for (long j = 0; j < m.ambient_rank; ++j) neg[j] = -m.generators[i][j];
    if (monoid_contains(m, neg).has_value()) idx.push_back(i);
  }
  return make_face(m, std::move(idx));
}

inline bool is_sharp(const AffineMonoid& m) {
  return units_face(m).lattice.rows == 0;
}

// ---------------------------------------------------------------------------
// cone geometry
// ---------------------------------------------------------------------------

// Facet description of cone(generators) within its linear span. Everything
// is expressed in coordinates on span_basis (a saturated lattice basis of
// span cap Z^n), so normals and membership tests share one frame. Facet
// normal candidates come from (d-1)-subsets of generators, kept when every
// generator lands on one side of the hyperplane.
struct ConeFacets {
  IntMat span_basis;                      // rows: saturated basis of the rational span
  std::vector<std::vector<Rat>> normals;  // functionals in span coordinates
  long dim = 0;                           // rank of the span
};

// coordinates of v on the span basis, if v lies in the rational span
inline std::optional<std::vector<Rat>> span_coordinates(const ConeFacets& cf,
                                                        const std::vector<Int>& v) {
  QField Q;
  const long d = cf.span_basis.rows;
  const long n = cf.span_basis.cols;
  FMat<QField> at(n, std::vector<Rat>(d));
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < n; ++c) at[c][r] = Rat(cf.span_basis.at(r, c));
  std::vector<Rat> b(n);
  for (long j = 0; j < n; ++j) b[j] = Rat(v[j]);
  return solve_right(Q, at, b, d);
}

inline ConeFacets cone_facets(const AffineMonoid& m) {
  const long s = m.generator_count();
  ConeFacets out;
  out.span_basis = lattice_saturation(m.generator_matrix());
  const long d = out.span_basis.rows;
  out.dim = d;
  if (d == 0) return out;
  QField Q;
  std::vector<std::vector<Rat>> gen_coords(s);
  for (long i = 0; i < s; ++i) {
    auto c = span_coordinates(out, m.generators[i]);
    if (!c) throw std::logic_error("cone_facets: generator outside its own span");
    gen_coords[i] = *c;
  }
  std::set<std::vector<Rat>> seen;
  auto consider = [&](const std::vector<long>& subset) {
    FMat<QField> rows;
    for (long i : subset) rows.push_back(gen_coords[i]);
    FMat<QField> ns = nullspace(Q, rows, d);
    if (ns.size() != 1) return;  // subset does not cut a hyperplane of the span
    std::vector<Rat> phi = ns[0];
    int sign = 0;
    for (long i = 0; i < s; ++i) {
      Rat dp = 0;
      for (long k = 0; k < d; ++k) dp += phi[k] * gen_coords[i][k];
      if (dp > 0) { if (sign < 0) return; sign = 1; }
      if (dp < 0) { if (sign > 0) return; sign = -1; }
    }
    if (sign == 0) return;  // all generators on the hyperplane; not a facet
    if (sign < 0)
      for (auto& v : phi) v = -v;
    for (const Rat& v : phi)
      if (v != 0) {
        Rat sc = 1 / (v < 0 ? -v : v);
        for (auto& w : phi) w = sc * w;
        break;
      }
    if (!seen.insert(phi).second) return;
    out.normals.push_back(phi);
  };
  std::vector<long> stack;
  std::function<void(long)> rec = [&](long start) {
    if (static_cast<long>(stack.size()) == d - 1) {
      consider(stack);
      return;
    }
    for (long i = start; i < s; ++i) {
      stack.push_back(i);
      rec(i + 1);
      stack.pop_back();
    }
  };
  rec(0);
  return out;
}

inline bool cone_contains(const ConeFacets& cf, const std::vector<Int>& v) {
  auto coords = span_coordinates(cf, v);
  if (!coords) return false;
  for (const auto& phi : cf.normals) {
    Rat dp = 0;
    for (size_t k = 0; k < phi.size(); ++k) dp += phi[k] * (*coords)[k];
    if (dp < 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// lattice quotients (shared by sharp quotients and the lineality split)
// ---------------------------------------------------------------------------

namespace detail {

// Present Z^r / rowspan(W) through the Smith column transform. Requires the
// sublattice saturated (all invariant factors 1), which makes the quotient
// free: in the adapted coordinates y = x * v, the sublattice occupies the
// first `rank_sub` slots and the quotient keeps the rest.
struct LatticeQuotient {
  IntMat v, v_inv;
  long rank_sub = 0;
  long total_rank = 0;

  std::vector<Int> project(const std::vector<Int>& x) const {
    std::vector<Int> y = vec_mat_mul(x, v);
    return std::vector<Int>(y.begin() + rank_sub, y.end());
  }

  std::vector<Int> lift(const std::vector<Int>& q) const {
    std::vector<Int> y(total_rank, Int(0));
    for (size_t i = 0; i < q.size(); ++i) y[rank_sub + static_cast<long>(i)] = q[i];
    return vec_mat_mul(y, v_inv);
  }
};

inline LatticeQuotient lattice_quotient(const IntMat& w, const std::string& torsion_msg) {
  LatticeQuotient out;
  out.total_rank = w.cols;
  SnfResult snf = smith_normal_form(w);
  long rs = 0;
  for (long t = 0; t < std::min(w.rows, w.cols); ++t) {
    if (snf.d.at(t, t) == 0) break;
    if (snf.d.at(t, t) != 1) throw config_error(torsion_msg);
    ++rs;
  }
  out.rank_sub = rs;
  out.v = snf.v;
  IntMat vinv(w.cols, w.cols);
  for (long i = 0; i < w.cols; ++i) {
    std::vector<Int> e(w.cols, Int(0));
    e[i] = 1;
    auto row = solve_left(e, snf.v);
    if (!row) throw std::logic_error("lattice_quotient: column transform not unimodular");
    for (long j = 0; j < w.cols; ++j) vinv.at(i, j) = (*row)[j];
  }
  out.v_inv = vinv;
  return out;
}

inline std::vector<std::vector<Int>> sorted_unique(std::vector<std::vector<Int>> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// saturation
// ---------------------------------------------------------------------------

namespace detail {

// Lattice points of cone(M) cap L inside the zonotope bounding box. Together
// with the generators these generate cone(M) cap L: split any nonnegative
// rational coefficient vector into integer and fractional parts; the
// fractional remainder stays in the zonotope and in L.
inline std::vector<std::vector<Int>> saturation_generating_set(const AffineMonoid& m,
                                                               const IntMat& L,
                                                               const ConeFacets& cf,
                                                               long budget) {
  const long n = m.ambient_rank;
  std::vector<Int> lo(n, Int(0)), hi(n, Int(0));
  for (const auto& g : m.generators) {
    if (!in_row_lattice(g, L))
      throw config_error("saturate: generator outside the given lattice");
    for (long j = 0; j < n; ++j) {
      if (g[j] < 0) lo[j] += g[j];
      if (g[j] > 0) hi[j] += g[j];
    }
  }
  Int volume = 1;
  for (long j = 0; j < n; ++j) {
    volume *= hi[j] - lo[j] + 1;
    if (volume > budget) throw resource_error("saturate: bounding box above budget");
  }
  std::vector<std::vector<Int>> out;
  for (const auto& g : m.generators) out.push_back(g);
  std::vector<Int> pt(n);
  std::function<void(long)> sweep = [&](long j) {
    if (j == n) {
      if (!in_row_lattice(pt, L)) return;
      if (!cone_contains(cf, pt)) return;
      out.push_back(pt);
      return;
    }
    for (Int v = lo[j]; v <= hi[j]; ++v) {
      pt[j] = v;
      sweep(j + 1);
    }
  };
  sweep(0);
  return sorted_unique(std::move(out));
}

// Hilbert basis of a pointed cone monoid from a generating set: an element
// is reducible exactly when subtracting some other generating-set element
// leaves a nonzero member, because every member decomposes into the set.
inline std::vector<std::vector<Int>> hilbert_filter(const std::vector<std::vector<Int>>& gen,
                                                    const IntMat& L, const ConeFacets& cf,
                                                    long n) {
  std::vector<Int> zero(n, Int(0));
  std::vector<std::vector<Int>> kept;
  for (const auto& x : gen) {
    if (x == zero) continue;
    bool reducible = false;
    for (const auto& y : gen) {
      if (y == zero || y == x) continue;
      std::vector<Int> diff(n);
      for (long j = 0; j < n; ++j) diff[j] = x[j] - y[j];
      if (diff == zero) continue;
      if (in_row_lattice(diff, L) && cone_contains(cf, diff)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) kept.push_back(x);
  }
  return kept;
}

}  // namespace detail

// Saturation of M inside the lattice spanned by the rows of L: the monoid
// cone(M) cap L. A pointed cone yields the genuine (unique minimal) Hilbert
// basis. With lineality the output is the standard split presentation:
// Hilbert basis of the pointed quotient, lifted canonically, plus a basis of
// the lineality lattice with its negatives.
inline AffineMonoid saturate_in_lattice(const AffineMonoid& m, const IntMat& L,
                                        long budget = 10000000) {
  const long n = m.ambient_rank;
  ConeFacets cf = cone_facets(m);
  QField Q;

  // lineality directions inside the span: common kernel of the facet normals
  FMat<QField> normal_rows;
  for (const auto& phi : cf.normals) normal_rows.push_back(phi);
  FMat<QField> lin_span;  // basis in span coordinates
  if (cf.dim > 0) {
    if (normal_rows.empty()) {
      for (long i = 0; i < cf.dim; ++i) {
        std::vector<Rat> e(cf.dim, Rat(0));
        e[i] = 1;
        lin_span.push_back(std::move(e));
      }
    } else {
      lin_span = nullspace(Q, normal_rows, cf.dim);
    }
  }

  if (lin_span.empty()) {
    // pointed cone
    std::vector<std::vector<Int>> gen = detail::saturation_generating_set(m, L, cf, budget);
    return AffineMonoid{n, detail::sorted_unique(detail::hilbert_filter(gen, L, cf, n))};
  }

  // ---- lineality split ----
  // lineality lattice: vectors of L lying in the lineality space; computed
  // as an integer kernel after clearing denominators
  const long r = L.rows;
  FMat<QField> lin_rows = lin_span;
  FMat<QField> ortho = nullspace(Q, lin_rows, cf.dim);  // functionals vanishing on lin
  // constraint matrix: for each L-basis row, its span coordinates dotted
  // against each orthogonal functional
  std::vector<std::vector<Rat>> cons(r, std::vector<Rat>(ortho.size()));
  for (long i = 0; i < r; ++i) {
    auto coords = span_coordinates(cf, L.row(i));
    if (!coords)
      throw config_error("saturate: lattice extends outside the cone span with lineality");
    for (size_t k = 0; k < ortho.size(); ++k) {
      Rat acc = 0;
      for (long j = 0; j < cf.dim; ++j) acc += (*coords)[j] * ortho[k][j];
      cons[i][k] = acc;
    }
  }
  // clear denominators column by column
  IntMat icons(r, static_cast<long>(ortho.size()));
  for (size_t k = 0; k < ortho.size(); ++k) {
    Int lc = 1;
    for (long i = 0; i < r; ++i)
      lc = lc / int_gcd(lc, boost::multiprecision::denominator(cons[i][k])) *
           boost::multiprecision::denominator(cons[i][k]);
    for (long i = 0; i < r; ++i) {
      Rat scaled = cons[i][k] * Rat(lc);
      icons.at(i, static_cast<long>(k)) = boost::multiprecision::numerator(scaled);
    }
  }
  IntMat lin_coeff = ortho.empty() ? IntMat::identity(r) : left_kernel(icons);
  // ambient vectors of the lineality lattice basis
  std::vector<std::vector<Int>> lin_basis;
  for (long i = 0; i < lin_coeff.rows; ++i)
    lin_basis.push_back(vec_mat_mul(lin_coeff.row(i), L));
  IntMat lin_mat = row_lattice_basis(IntMat::from_rows(lin_basis, n));

  // quotient L / lin, presented on L-coefficient coordinates
  std::vector<std::vector<Int>> lin_in_L;
  for (long i = 0; i < lin_mat.rows; ++i) {
    auto c = solve_left(lin_mat.row(i), L);
    if (!c) throw std::logic_error("saturate: lineality basis outside the lattice");
    lin_in_L.push_back(*c);
  }
  detail::LatticeQuotient quo = detail::lattice_quotient(
      IntMat::from_rows(lin_in_L, r),
      "saturate: lineality lattice not saturated in the ambient lattice");

  // projected monoid: classes of generators in the free quotient
  AffineMonoid mbar;
  mbar.ambient_rank = r - quo.rank_sub;
  for (const auto& g : m.generators) {
    auto c = solve_left(g, L);
    if (!c) throw config_error("saturate: generator outside the given lattice");
    mbar.generators.push_back(quo.project(*c));
  }
  AffineMonoid sat_bar = saturate_in_lattice(mbar, IntMat::identity(mbar.ambient_rank), budget);

  std::vector<std::vector<Int>> out_gens;
  for (const auto& h : sat_bar.generators)
    out_gens.push_back(vec_mat_mul(quo.lift(h), L));  // canonical lift stays in the cone
  for (long i = 0; i < lin_mat.rows; ++i) {
    std::vector<Int> v = lin_mat.row(i), w(n);
    for (long j = 0; j < n; ++j) w[j] = -v[j];
    out_gens.push_back(std::move(v));
    out_gens.push_back(std::move(w));
  }
  return AffineMonoid{n, detail::sorted_unique(std::move(out_gens))};
}

// canonical saturation: inside the groupification (invariant under the
// choice of ambient embedding)
inline AffineMonoid saturate(const AffineMonoid& m, long budget = 10000000) {
  return saturate_in_lattice(m, groupification(m), budget);
}

// variant saturating against the full ambient lattice Z^n
inline AffineMonoid saturate_in_ambient(const AffineMonoid& m, long budget = 10000000) {
  return saturate_in_lattice(m, IntMat::identity(m.ambient_rank), budget);
}

inline bool monoid_subset(const AffineMonoid& a, const AffineMonoid& b) {
  for (const auto& g : a.generators)
    if (!monoid_contains(b, g).has_value()) return false;
  return true;
}

inline bool monoid_set_equal(const AffineMonoid& a, const AffineMonoid& b) {
  return a.ambient_rank == b.ambient_rank && monoid_subset(a, b) && monoid_subset(b, a);
}

inline bool is_saturated(const AffineMonoid& m, long budget = 10000000) {
  return monoid_subset(saturate(m, budget), m);
}

// ---------------------------------------------------------------------------
// sharp quotients
// ---------------------------------------------------------------------------

// M/F re-embedded in M^gp/F^gp. Requires F^gp saturated in M^gp (else the
// quotient group has torsion and does not embed in a lattice); saturated
// monoids always satisfy this, a general fine monoid need not.
struct SharpQuotient {
  AffineMonoid quotient;  // embedded in Z^{r - rf}
  IntMat gp_basis;        // rows: basis of M^gp in ambient coordinates
  detail::LatticeQuotient quo;

  std::vector<Int> to_gp(const std::vector<Int>& ambient) const {
    auto c = solve_left(ambient, gp_basis);
    if (!c) throw config_error("sharp quotient: vector outside M^gp");
    return *c;
  }

  std::vector<Int> project(const std::vector<Int>& gp) const { return quo.project(gp); }

  std::vector<Int> lift_to_ambient(const std::vector<Int>& qcoords) const {
    return vec_mat_mul(quo.lift(qcoords), gp_basis);
  }
};

inline SharpQuotient sharp_quotient_at_face(const AffineMonoid& m, const Face& f) {
  if (!is_face(m, f)) throw config_error("sharp quotient: not a face of the monoid");
  SharpQuotient out;
  out.gp_basis = groupification(m);
  const long r = out.gp_basis.rows;
  std::vector<std::vector<Int>> frows;
  for (long i : f.member_indices) {
    auto c = solve_left(m.generators[i], out.gp_basis);
    if (!c) throw std::logic_error("sharp quotient: face generator outside M^gp");
    frows.push_back(*c);
  }
  out.quo = detail::lattice_quotient(
      IntMat::from_rows(frows, r),
      "sharp quotient: face lattice not saturated in M^gp (torsion quotient); saturate the "
      "monoid first");
  out.quotient.ambient_rank = r - out.quo.rank_sub;
  for (const auto& g : m.generators)
    out.quotient.generators.push_back(out.project(out.to_gp(g)));
  return out;
}

// ---------------------------------------------------------------------------
// homomorphisms
// ---------------------------------------------------------------------------

struct MonoidHom {
  AffineMonoid source, target;
  std::vector<std::vector<Int>> generator_images;    // lattice vectors in the target
  std::vector<std::vector<Int>> image_certificates;  // nonnegative combinations
  // extension to the ambient lattices, acting on row vectors; absent when no
  // integral extension exists (possible when the source generators span a
  // non-summand sublattice)
  std::optional<IntMat> gp_matrix;

  std::vector<Int> apply_gp(const std::vector<Int>& v) const {
    if (!gp_matrix) throw config_error("hom: no integral extension to the ambient lattice");
    return vec_mat_mul(v, *gp_matrix);
  }
};

// Build a hom from image vectors; membership certificates are found by
// search, and an integral extension to the ambient lattices is solved for
// column by column (one target coordinate at a time).
inline MonoidHom make_hom(AffineMonoid source, AffineMonoid target,
                          std::vector<std::vector<Int>> images) {
  if (images.size() != source.generators.size())
    throw config_error("hom: one image per source generator required");
  MonoidHom h;
  h.source = std::move(source);
  h.target = std::move(target);
  h.generator_images = std::move(images);
  for (const auto& im : h.generator_images) {
    if (static_cast<long>(im.size()) != h.target.ambient_rank)
      throw config_error("hom: image dimension mismatch");
    auto cert = monoid_contains(h.target, im);
    if (!cert) throw config_error("hom: generator image is not in the target monoid");
    h.image_certificates.push_back(*cert);
  }
  const long ns = h.source.ambient_rank, nt = h.target.ambient_rank;
  const long s = h.source.generator_count();
  IntMat gsrc_t = transpose(h.source.generator_matrix());
  IntMat a(ns, nt);
  bool extendable = true;
  for (long c = 0; c < nt && extendable; ++c) {
    std::vector<Int> im_col(s);
    for (long i = 0; i < s; ++i) im_col[i] = h.generator_images[i][c];
    auto col = solve_left(im_col, gsrc_t);
    if (!col) {
      extendable = false;
      break;
    }
    for (long j = 0; j < ns; ++j) a.at(j, c) = (*col)[j];
  }
  if (extendable) h.gp_matrix = a;
  return h;
}

// gp-level matrix in Hermite bases of source and target groupifications
inline IntMat hom_gp_in_bases(const MonoidHom& h) {
  IntMat bq = groupification(h.source);
  IntMat bp = groupification(h.target);
  IntMat gsrc = h.source.generator_matrix();
  IntMat out(bq.rows, bp.rows);
  for (long t = 0; t < bq.rows; ++t) {
    auto coeff = solve_left(bq.row(t), gsrc);
    if (!coeff) throw std::logic_error("hom_gp_in_bases: basis row outside generator lattice");
    std::vector<Int> im(h.target.ambient_rank, Int(0));
    for (size_t i = 0; i < coeff->size(); ++i)
      for (long j = 0; j < h.target.ambient_rank; ++j)
        im[j] += (*coeff)[i] * h.generator_images[i][j];
    auto coords = solve_left(im, bp);
    if (!coords) throw std::logic_error("hom_gp_in_bases: image outside target groupification");
    for (long j = 0; j < bp.rows; ++j) out.at(t, j) = (*coords)[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// tameness and the arithmetic smoothness condition
// ---------------------------------------------------------------------------

// Torsion primes of cok(Q^gp -> P^gp/F^gp): the target face is killed along
// with the units at its stratum, so these are the primes that can obstruct
// tameness at points whose unit face is F.
inline std::vector<Int> tame_torsion_primes(const MonoidHom& h, const Face& f) {
  IntMat bp = groupification(h.target);
  IntMat im = hom_gp_in_bases(h);
  std::vector<std::vector<Int>> rows = im.to_rows();
  for (long i : f.member_indices) {
    auto coords = solve_left(h.target.generators[i], bp);
    if (!coords) throw std::logic_error("tame: face generator outside target groupification");
    rows.push_back(*coords);
  }
  CokernelInvariants inv = cokernel_invariants(IntMat::from_rows(rows, bp.rows));
  std::set<Int> primes;
  for (const Int& t : inv.torsion)
    for (const Int& p : prime_factors(t)) primes.insert(p);
  return std::vector<Int>(primes.begin(), primes.end());
}

struct KatoResult {
  bool smooth_ok = false;
  bool etale_ok = false;
  bool kernel_trivial = false;
  CokernelInvariants cokernel;
};

// Kato's criterion, arithmetic part: the kernel of Q^gp -> P^gp must vanish
// (a finite subgroup of a free group is trivial) and the cokernel torsion
// must be invertible in the residue characteristic; etale additionally
// forbids free cokernel rank.
inline KatoResult kato_condition(const MonoidHom& h, const Int& residue_char) {
  KatoResult out;
  IntMat im = hom_gp_in_bases(h);
  long rank = static_cast<long>(hermite_normal_form(im).pivot_cols.size());
  out.kernel_trivial = rank == im.rows;
  out.cokernel = cokernel_invariants(im);
  bool torsion_ok = true;
  for (const Int& t : out.cokernel.torsion)
    if (residue_char != 0 && t % residue_char == 0) torsion_ok = false;
  out.smooth_ok = out.kernel_trivial && torsion_ok;
  out.etale_ok = out.smooth_ok && out.cokernel.free_rank == 0;
  return out;
}

}  // namespace logbertini
