#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/dvrscalar.hpp"
#include "logbertini/linalg.hpp"
#include "logbertini/mpoly.hpp"
#include "logbertini/qfield.hpp"

namespace logbertini {

// ---------------------------------------------------------------------------
// projective points over V and their specialization
// ---------------------------------------------------------------------------

// A V-point of projective space, held by a primitive homogeneous
// representative: every coordinate lies in the ring and at least one is a
// unit. Such a point always specializes to a genuine point of the special
// fibre, reduction never loses it.
struct ProjPointV {
  std::vector<DVRScalar> coords;
};

inline ProjPointV make_proj_point(std::vector<DVRScalar> coords) {
  if (coords.empty()) throw config_error("point: no coordinates");
  bool unit_seen = false, nonzero_seen = false;
  for (const DVRScalar& c : coords) {
    if (!c.in_ring()) throw config_error("point: coordinate has a pole at pi = 0");
    if (c.is_zero()) continue;
    nonzero_seen = true;
    if (c.valuation() == 0) unit_seen = true;
  }
  if (!nonzero_seen) throw config_error("point: all coordinates are zero");
  if (!unit_seen)
    throw config_error("point: representative is not primitive, divide out pi first");
  return ProjPointV{std::move(coords)};
}

inline std::vector<Rat> specialize_point(const ProjPointV& x) {
  std::vector<Rat> out;
  out.reserve(x.coords.size());
  for (const DVRScalar& c : x.coords) out.push_back(c.residue());
  return out;
}

// The same specialization computed through the affine chart where the given
// coordinate is a unit. Agrees with the projective computation whenever the
// chart contains the residue point.
inline std::vector<Rat> specialize_via_chart(const ProjPointV& x, long chart) {
  PiField k;
  if (chart < 0 || chart >= static_cast<long>(x.coords.size()))
    throw config_error("point: chart index out of range");
  const DVRScalar& c = x.coords[chart];
  if (c.is_zero() || c.valuation() != 0)
    throw config_error("point: chart coordinate is not a unit at the point");
  std::vector<Rat> out;
  for (const DVRScalar& y : x.coords) out.push_back(k.div(y, c).residue());
  return out;
}

inline bool proj_points_equal(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// valuation-aware lattice computations
// ---------------------------------------------------------------------------

// A V-submodule of the standard lattice in reduced form: distinct pivot
// columns, every other row zero at each pivot column. Saturations carry
// unit pivots; derived lattices may scale a pivot by pi.
struct DVRLattice {
  FMat<PiField> rows;
  std::vector<long> pivots;
};

// Reduced V-basis of (K-span of the rows) intersected with the standard
// lattice V^width. Pivots are chosen at minimum valuation and scaled to 1,
// so the row span over V is exactly the saturation. Throws when the rows
// are dependent over K.
inline DVRLattice dvr_saturate(const FMat<PiField>& rows) {
  PiField k;
  FMat<PiField> work = rows;
  DVRLattice out;
  if (work.empty()) return out;
  const long width = static_cast<long>(work[0].size());
  for (auto& row : work)
    if (static_cast<long>(row.size()) != width)
      throw config_error("lattice: ragged rows");
  while (!work.empty()) {
    long best_row = -1, best_col = -1, best_val = 0;
    for (size_t i = 0; i < work.size(); ++i)
      for (long j = 0; j < width; ++j) {
        if (k.is_zero(work[i][j])) continue;
        long v = work[i][j].valuation();
        if (best_row < 0 || v < best_val) {
          best_row = static_cast<long>(i);
          best_col = j;
          best_val = v;
        }
      }
    if (best_row < 0) throw config_error("lattice: rows are dependent over K");
    std::swap(work[best_row], work.back());
    std::vector<DVRScalar> pivot = std::move(work.back());
    work.pop_back();
    DVRScalar lead = pivot[best_col];
    for (auto& c : pivot) c = k.div(c, lead);
    for (auto& row : work) {
      DVRScalar f = row[best_col];
      if (k.is_zero(f)) continue;
      for (long j = 0; j < width; ++j) row[j] = k.sub(row[j], k.mul(f, pivot[j]));
    }
    // clear the pivot column of the finished rows as well, for a reduced form
    for (auto& row : out.rows) {
      DVRScalar f = row[best_col];
      if (k.is_zero(f)) continue;
      for (long j = 0; j < width; ++j) row[j] = k.sub(row[j], k.mul(f, pivot[j]));
    }
    out.rows.push_back(std::move(pivot));
    out.pivots.push_back(best_col);
  }
  for (const auto& row : out.rows)
    for (const auto& c : row)
      if (!c.in_ring()) throw config_error("lattice: reduction left the ring");
  return out;
}

// Membership of a lattice vector in the V-span of a reduced basis: divide
// out each pivot, demanding a ring quotient, and ask for a zero remainder.
// Distinct cleared pivot columns make the elimination order immaterial.
inline bool dvr_in_span(const DVRLattice& lat, std::vector<DVRScalar> v) {
  PiField k;
  for (size_t i = 0; i < lat.rows.size(); ++i) {
    const auto& row = lat.rows[i];
    const long pc = lat.pivots[i];
    if (k.is_zero(v[pc])) continue;
    DVRScalar f = k.div(v[pc], row[pc]);
    if (!f.in_ring()) return false;
    for (size_t j = 0; j < row.size(); ++j) v[j] = k.sub(v[j], k.mul(f, row[j]));
  }
  for (const auto& c : v)
    if (!k.is_zero(c)) return false;
  return true;
}

inline bool dvr_module_contains(const DVRLattice& lat, const FMat<PiField>& rows) {
  for (const auto& row : rows)
    if (!dvr_in_span(lat, row)) return false;
  return true;
}

// Valuations of the invariant factors of the V-module presented by the
// rows inside the standard lattice, smallest first. Units contribute 0.
inline std::vector<long> dvr_invariant_valuations(FMat<PiField> rows) {
  PiField k;
  std::vector<long> out;
  while (true) {
    long best_row = -1, best_col = -1, best_val = 0;
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < rows[i].size(); ++j) {
        if (k.is_zero(rows[i][j])) continue;
        long v = rows[i][j].valuation();
        if (best_row < 0 || v < best_val) {
          best_row = static_cast<long>(i);
          best_col = static_cast<long>(j);
          best_val = v;
        }
      }
    if (best_row < 0) break;
    out.push_back(best_val);
    std::swap(rows[best_row], rows.back());
    std::vector<DVRScalar> pivot = std::move(rows.back());
    rows.pop_back();
    for (auto& row : rows) {
      DVRScalar f = k.div(row[best_col], pivot[best_col]);
      if (k.is_zero(f)) continue;
      for (size_t j = 0; j < row.size(); ++j)
        row[j] = k.sub(row[j], k.mul(f, pivot[j]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// the degree-d forms vanishing at the marked point
// ---------------------------------------------------------------------------

// Basis of the lattice of degree-d forms through P = (1:0:...:0): every
// degree-d monomial except x0^d, plus pi times x0^d. Exponent vectors are
// listed in descending lexicographic order with the pi-marked element last.
struct GammaElement {
  std::vector<long> exponent;
  bool pi_marked = false;
};

struct GammaIdealBasis {
  long n = 0;
  long d = 0;
  std::vector<GammaElement> elements;
  // bookkeeping of the three short exact sequences tying the lattice to the
  // degree-d forms of the special fibre
  bool quotient_is_v_mod_pi = false;  // lattice quotient has invariant factors (1,..,1,pi)
  long reduced_rank = 0;              // rank of the basis reduced mod pi
  long reduction_kernel_dim = 0;
  bool kernel_is_pi_marked_class = false;
  long pointed_kernel_dim = 0;  // forms on the special fibre vanishing at P
  bool reduction_lands_in_pointed = false;
};

namespace detail {

inline void monomials_desc(long vars, long d, std::vector<long>& prefix,
                           std::vector<std::vector<long>>& out) {
  if (static_cast<long>(prefix.size()) == vars - 1) {
    prefix.push_back(d);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (long e = d; e >= 0; --e) {
    prefix.push_back(e);
    monomials_desc(vars, d - e, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<long>> degree_monomials(long vars, long d) {
  std::vector<std::vector<long>> out;
  std::vector<long> prefix;
  monomials_desc(vars, d, prefix, out);
  return out;
}

}  // namespace detail

inline GammaIdealBasis gamma_ideal_basis(long n, long d) {
  if (n < 1 || d < 1) throw config_error("gamma: need n >= 1 and d >= 1");
  GammaIdealBasis out;
  out.n = n;
  out.d = d;
  auto monomials = detail::degree_monomials(n + 1, d);
  const long count = static_cast<long>(monomials.size());
  for (const auto& e : monomials)
    if (e[0] != d) out.elements.push_back(GammaElement{e, false});
  std::vector<long> x0d(n + 1, 0);
  x0d[0] = d;
  out.elements.push_back(GammaElement{x0d, true});

  // coordinates of the basis inside the monomial lattice of all degree-d forms
  PiField pk;
  std::map<std::vector<long>, long> col;
  for (long j = 0; j < count; ++j) col[monomials[j]] = j;
  FMat<PiField> lattice;
  for (const auto& el : out.elements) {
    std::vector<DVRScalar> row(count, pk.zero());
    row[col[el.exponent]] = el.pi_marked ? DVRScalar::pi() : pk.one();
    lattice.push_back(std::move(row));
  }

  // the quotient by the full monomial lattice must be V/pi exactly
  std::vector<long> expect(count, 0);
  expect.back() = 1;
  out.quotient_is_v_mod_pi = dvr_invariant_valuations(lattice) == expect;

  // reduce mod pi: the pi-marked row dies, everything else stays independent,
  // and the one-dimensional kernel is spanned by the marked class
  QField qf;
  FMat<QField> reduced;
  for (const auto& row : lattice) {
    std::vector<Rat> r;
    for (const auto& c : row) r.push_back(c.residue());
    reduced.push_back(std::move(r));
  }
  out.reduced_rank = frank(qf, reduced);
  FMat<QField> transpose(count, std::vector<Rat>(out.elements.size()));
  for (size_t i = 0; i < reduced.size(); ++i)
    for (long j = 0; j < count; ++j) transpose[j][i] = reduced[i][j];
  FMat<QField> kernel = nullspace(qf, transpose, static_cast<long>(out.elements.size()));
  out.reduction_kernel_dim = static_cast<long>(kernel.size());
  if (kernel.size() == 1) {
    bool marked_only = true;
    for (size_t j = 0; j + 1 < kernel[0].size(); ++j)
      if (kernel[0][j] != 0) marked_only = false;
    out.kernel_is_pi_marked_class = marked_only && kernel[0].back() != 0;
  }

  // evaluation at P on the special fibre: the reduced basis must land in
  // the forms vanishing at P and fill that kernel exactly
  std::vector<Rat> eval_row;
  for (const auto& m : monomials) {
    Rat v = 1;
    for (long i = 1; i <= n; ++i)
      if (m[i] > 0) v = 0;
    eval_row.push_back(v);
  }
  out.pointed_kernel_dim = count - frank(qf, FMat<QField>{eval_row});
  bool lands = true;
  for (const auto& row : reduced) {
    Rat dot = 0;
    for (long j = 0; j < count; ++j) dot += row[j] * eval_row[j];
    if (dot != 0) lands = false;
  }
  out.reduction_lands_in_pointed = lands && out.reduced_rank == out.pointed_kernel_dim;
  return out;
}

inline long gamma_basis_size(long n, long d) {
  Int c = 1;
  for (long i = 1; i <= n; ++i) c = c * (d + i) / i;
  return static_cast<long>(c);
}

// ---------------------------------------------------------------------------
// the blow-up chart verifier
// ---------------------------------------------------------------------------

// The blow-up of projective n-space at P embeds into the projective space
// of the degree-2 forms through P. Around P the image is covered by charts
// whose coordinate rings are generated by t_i, u_ji, s_i with the single
// relation s_i t_i = pi, plus one chart in s_j inverses. The verifier
// replays the generator assignments on each chart and confirms every
// multiplicative identity between coordinate functions literally, with the
// published certificate for the u_ji t_k = u_ki t_j exchange identities.
struct BlowupChartReport {
  long chart = 0;  // 1..n for the A_i, 0 for the s-inverse chart
  long identities_checked = 0;
  bool identities_hold = true;
  bool surjective = true;
  bool exchange_ok = true;   // u_ji t_k = u_ki t_j, charts 1..n
  bool kernel_ok = true;     // chart 0 only: the mod-pi kernel generators
  std::vector<std::string> identities;  // one line per checked identity
  std::string counterexample;
};

struct BlowupReport {
  long n = 0;
  std::vector<BlowupChartReport> charts;
  bool all_ok = true;
};

namespace detail {

// one degree-2 basis element: an x-monomial exponent vector plus a pi flag
struct QuadMonomial {
  std::vector<long> exponent;
  bool pi_marked;
};

inline std::string quad_name(const QuadMonomial& q) {
  std::string s = q.pi_marked ? "pi" : "";
  for (size_t v = 0; v < q.exponent.size(); ++v) {
    if (q.exponent[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(v);
    if (q.exponent[v] > 1) s += "^" + std::to_string(q.exponent[v]);
  }
  return s;
}

// renders one ambient product identity y_a y_b pi^e == y_c y_d pi^f
inline std::string product_identity_line(const std::vector<QuadMonomial>& basis,
                                         std::pair<long, long> left, long left_balance,
                                         std::pair<long, long> right,
                                         long right_balance) {
  auto side = [&](std::pair<long, long> pr, long balance) {
    std::string txt = "(" + quad_name(basis[pr.first]) + ")(" +
                      quad_name(basis[pr.second]) + ")";
    if (balance > 0) txt += "*pi^" + std::to_string(balance);
    return txt;
  };
  return side(left, left_balance) + " == " + side(right, right_balance);
}

inline std::vector<QuadMonomial> quad_basis(long n) {
  std::vector<QuadMonomial> out;
  for (const auto& e : degree_monomials(n + 1, 2))
    if (e[0] != 2) out.push_back(QuadMonomial{e, false});
  std::vector<long> x0sq(n + 1, 0);
  x0sq[0] = 2;
  out.push_back(QuadMonomial{x0sq, true});
  return out;
}

// normal form in V[t_i, u_j, s_i] modulo s_i t_i = pi; the rewrite acts on
// each monomial independently, so one pass suffices
inline MPoly<QField> chart_normal_form(const QField& k, const MPoly<QField>& m,
                                       long t_var, long s_var) {
  MPoly<QField> out{m.vars, {}};
  for (const auto& [e, c] : m.terms) {
    std::vector<long> ne = e;
    long w = std::min(ne[t_var], ne[s_var]);
    ne[t_var] -= w;
    ne[s_var] -= w;
    ne[0] += w;  // variable 0 is pi
    mpoly::add_term(k, out, ne, c);
  }
  return out;
}

}  // namespace detail

inline BlowupReport blowup_chart_verify(long n) {
  if (n < 1 || n > 4) throw config_error("blowup: supported range is 1 <= n <= 4");
  QField k;
  BlowupReport rep;
  rep.n = n;
  auto basis = detail::quad_basis(n);
  const long nb = static_cast<long>(basis.size());

  auto mono_of = [&](long vars, std::vector<long> exps) {
    return mpoly::term(k, vars, k.one(), std::move(exps));
  };

  // charts A_i, 1 <= i <= n: variables pi, t_i, s_i, u_j (j != i)
  for (long i = 1; i <= n; ++i) {
    BlowupChartReport cr;
    cr.chart = i;
    const long vars = n + 2;
    const long t_var = 1, s_var = 2;
    auto u_var = [&](long j) { return 3 + j - 1 - (j > i ? 1 : 0); };
    auto var_mono = [&](long v, long extra_pi = 0) {
      std::vector<long> e(vars, 0);
      e[v] = 1;
      e[0] += extra_pi;
      return mono_of(vars, e);
    };

    // the image of each basis element divided by x_i x_0
    std::vector<MPoly<QField>> image(nb, mpoly::zero<QField>(vars));
    std::vector<bool> has_image(nb, false);
    for (long b = 0; b < nb; ++b) {
      const auto& e = basis[b].exponent;
      if (basis[b].pi_marked) {
        image[b] = var_mono(s_var);
      } else if (e[0] == 1) {
        long j = 0;
        for (long v = 1; v <= n; ++v)
          if (e[v] == 1) j = v;
        if (j == i) {
          std::vector<long> one(vars, 0);
          image[b] = mono_of(vars, one);  // x_i x_0 over itself
        } else {
          image[b] = var_mono(u_var(j));
        }
      } else {
        // x_j x_l with j, l >= 1: substitute t_m = u_m t_i for m != i
        std::vector<long> ex(vars, 0);
        for (long v = 1; v <= n; ++v) {
          if (e[v] == 0) continue;
          if (v == i) {
            ex[t_var] += e[v];
          } else {
            ex[u_var(v)] += e[v];
            ex[t_var] += e[v];
          }
        }
        ex[t_var] -= 1;  // divide x_j x_l / (x_i x_0) = t_j t_l / t_i
        image[b] = mono_of(vars, ex);
      }
      has_image[b] = true;
    }

    // multiplicative consistency: whenever b1 b2 and b3 b4 agree as
    // monomials times a pi power, their images must agree in the chart ring
    auto product_key = [&](long b1, long b2) {
      std::vector<long> e(n + 1, 0);
      for (long v = 0; v <= n; ++v)
        e[v] = basis[b1].exponent[v] + basis[b2].exponent[v];
      long pi_pow = (basis[b1].pi_marked ? 1 : 0) + (basis[b2].pi_marked ? 1 : 0);
      return std::make_pair(e, pi_pow);
    };
    std::map<std::vector<long>, std::vector<std::pair<long, long>>> groups;
    for (long b1 = 0; b1 < nb; ++b1)
      for (long b2 = b1; b2 < nb; ++b2)
        groups[product_key(b1, b2).first].push_back({b1, b2});
    for (const auto& [mono, pairs] : groups) {
      for (size_t a = 0; a < pairs.size(); ++a)
        for (size_t c = a + 1; c < pairs.size(); ++c) {
          long e_a = product_key(pairs[a].first, pairs[a].second).second;
          long e_c = product_key(pairs[c].first, pairs[c].second).second;
          MPoly<QField> lhs = mpoly::mul(k, image[pairs[a].first], image[pairs[a].second]);
          MPoly<QField> rhs = mpoly::mul(k, image[pairs[c].first], image[pairs[c].second]);
          std::vector<long> pia(vars, 0), pic(vars, 0);
          pia[0] = e_c;
          pic[0] = e_a;
          lhs = mpoly::mul(k, lhs, mono_of(vars, pia));
          rhs = mpoly::mul(k, rhs, mono_of(vars, pic));
          lhs = detail::chart_normal_form(k, lhs, t_var, s_var);
          rhs = detail::chart_normal_form(k, rhs, t_var, s_var);
          cr.identities.push_back(
              detail::product_identity_line(basis, pairs[a], e_c, pairs[c], e_a));
          ++cr.identities_checked;
          if (!mpoly::eq(k, lhs, rhs)) {
            cr.identities_hold = false;
            if (cr.counterexample.empty())
              cr.counterexample = "chart " + std::to_string(i) +
                                  ": a product identity fails on the basis pair group";
          }
        }
    }

    // surjectivity: t_i, s_i and every u_j occur among the images
    auto image_present = [&](const MPoly<QField>& target) {
      for (long b = 0; b < nb; ++b)
        if (has_image[b] && mpoly::eq(k, image[b], target)) return true;
      return false;
    };
    cr.surjective = image_present(var_mono(t_var)) && image_present(var_mono(s_var));
    for (long j = 1; j <= n && cr.surjective; ++j)
      if (j != i) cr.surjective = image_present(var_mono(u_var(j)));

    // the exchange identities, certified inside the full presentation
    // V[t_1..t_n, u_j, s_i]: u_j t_l - u_l t_j equals
    // u_l (t_i u_j - t_j) - u_j (t_i u_l - t_l) on the nose
    {
      const long pvars = 1 + n + (n - 1) + 1;  // pi, t_1..t_n, u_j (j != i), s_i
      auto pt = [&](long j) { return j; };     // t_j at index j
      auto pu = [&](long j) { return 1 + n + j - 1 - (j > i ? 1 : 0); };
      auto pmono = [&](long v) {
        std::vector<long> e(pvars, 0);
        e[v] = 1;
        return mono_of(pvars, e);
      };
      for (long j = 1; j <= n; ++j)
        for (long l = j + 1; l <= n; ++l) {
          if (j == i || l == i) continue;
          MPoly<QField> lhs = mpoly::sub(
              k, mpoly::mul(k, pmono(pu(j)), pmono(pt(l))),
              mpoly::mul(k, pmono(pu(l)), pmono(pt(j))));
          MPoly<QField> rel_j = mpoly::sub(
              k, mpoly::mul(k, pmono(pt(i)), pmono(pu(j))), pmono(pt(j)));
          MPoly<QField> rel_l = mpoly::sub(
              k, mpoly::mul(k, pmono(pt(i)), pmono(pu(l))), pmono(pt(l)));
          MPoly<QField> cert = mpoly::sub(k, mpoly::mul(k, pmono(pu(l)), rel_j),
                                          mpoly::mul(k, pmono(pu(j)), rel_l));
          auto tn = [](long v) { return "t" + std::to_string(v); };
          auto un = [](long v) { return "u" + std::to_string(v); };
          cr.identities.push_back(
              un(j) + "*" + tn(l) + " - " + un(l) + "*" + tn(j) + " == " + un(l) +
              "*(" + tn(i) + "*" + un(j) + " - " + tn(j) + ") - " + un(j) + "*(" +
              tn(i) + "*" + un(l) + " - " + tn(l) + ")");
          ++cr.identities_checked;
          if (!mpoly::eq(k, lhs, cert)) {
            cr.exchange_ok = false;
            cr.counterexample = "chart " + std::to_string(i) +
                                ": exchange certificate mismatch for t_" +
                                std::to_string(j) + ", t_" + std::to_string(l);
          }
        }
    }
    rep.all_ok = rep.all_ok && cr.identities_hold && cr.surjective && cr.exchange_ok;
    rep.charts.push_back(std::move(cr));
  }

  // chart 0: variables pi, sigma_1..sigma_n, where sigma_j stands for the
  // s_j inverse and the ring is free
  {
    BlowupChartReport cr;
    cr.chart = 0;
    const long vars = n + 1;
    auto sigma = [&](long j) {
      std::vector<long> e(vars, 0);
      e[j] = 1;
      return mono_of(vars, e);
    };
    std::vector<MPoly<QField>> image(nb, mpoly::zero<QField>(vars));
    for (long b = 0; b < nb; ++b) {
      const auto& e = basis[b].exponent;
      if (basis[b].pi_marked) {
        std::vector<long> one(vars, 0);
        image[b] = mono_of(vars, one);
      } else if (e[0] == 1) {
        long j = 0;
        for (long v = 1; v <= n; ++v)
          if (e[v] == 1) j = v;
        image[b] = sigma(j);
      } else {
        std::vector<long> ex(vars, 0);
        ex[0] = 1;
        for (long v = 1; v <= n; ++v) ex[v] = e[v];
        image[b] = mono_of(vars, ex);  // pi sigma_j sigma_l
      }
    }
    auto product_key = [&](long b1, long b2) {
      std::vector<long> e(n + 1, 0);
      for (long v = 0; v <= n; ++v)
        e[v] = basis[b1].exponent[v] + basis[b2].exponent[v];
      long pi_pow = (basis[b1].pi_marked ? 1 : 0) + (basis[b2].pi_marked ? 1 : 0);
      return std::make_pair(e, pi_pow);
    };
    std::map<std::vector<long>, std::vector<std::pair<long, long>>> groups;
    for (long b1 = 0; b1 < nb; ++b1)
      for (long b2 = b1; b2 < nb; ++b2)
        groups[product_key(b1, b2).first].push_back({b1, b2});
    for (const auto& [mono, pairs] : groups) {
      for (size_t a = 0; a < pairs.size(); ++a)
        for (size_t c = a + 1; c < pairs.size(); ++c) {
          long e_a = product_key(pairs[a].first, pairs[a].second).second;
          long e_c = product_key(pairs[c].first, pairs[c].second).second;
          MPoly<QField> lhs = mpoly::mul(k, image[pairs[a].first], image[pairs[a].second]);
          MPoly<QField> rhs = mpoly::mul(k, image[pairs[c].first], image[pairs[c].second]);
          std::vector<long> pia(vars, 0), pic(vars, 0);
          pia[0] = e_c;
          pic[0] = e_a;
          lhs = mpoly::mul(k, lhs, mono_of(vars, pia));
          rhs = mpoly::mul(k, rhs, mono_of(vars, pic));
          cr.identities.push_back(
              detail::product_identity_line(basis, pairs[a], e_c, pairs[c], e_a));
          ++cr.identities_checked;
          if (!mpoly::eq(k, lhs, rhs)) {
            cr.identities_hold = false;
            if (cr.counterexample.empty())
              cr.counterexample = "chart 0: a product identity fails";
          }
        }
    }
    // surjectivity: every sigma_j is hit
    cr.surjective = true;
    for (long j = 1; j <= n && cr.surjective; ++j) {
      bool found = false;
      for (long b = 0; b < nb; ++b)
        if (mpoly::eq(k, image[b], sigma(j))) found = true;
      cr.surjective = found;
    }
    // mod pi, the coordinates x_j x_l (j, l >= 1) must die and the
    // coordinates x_j x_0 must map bijectively onto the sigma variables,
    // which makes them generate the kernel exactly
    cr.kernel_ok = true;
    std::vector<bool> sigma_hit(n + 1, false);
    for (long b = 0; b < nb; ++b) {
      const auto& e = basis[b].exponent;
      MPoly<QField> red = mpoly::substitute(k, image[b], 0, k.zero());
      if (basis[b].pi_marked) continue;  // the unit coordinate of the chart
      if (e[0] == 1) {
        long j = 0;
        for (long v = 1; v <= n; ++v)
          if (e[v] == 1) j = v;
        if (!mpoly::eq(k, red, sigma(j)) || sigma_hit[j]) cr.kernel_ok = false;
        sigma_hit[j] = true;
      } else {
        if (!mpoly::is_zero(red)) cr.kernel_ok = false;
      }
    }
    for (long j = 1; j <= n; ++j)
      if (!sigma_hit[j]) cr.kernel_ok = false;
    if (!cr.kernel_ok && cr.counterexample.empty())
      cr.counterexample = "chart 0: the mod pi kernel is not the expected coordinate set";
    rep.all_ok = rep.all_ok && cr.identities_hold && cr.surjective && cr.kernel_ok;
    rep.charts.push_back(std::move(cr));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// grassmannian specialization
// ---------------------------------------------------------------------------

// An r-dimensional subspace of the degree-2 forms through P over K,
// specialized to the special fibre. The subspace is given by ring
// coefficients in the gamma basis order with the pi-marked slot last. The
// membership flag asks for the saturations taken inside the two natural
// lattices, all degree-2 forms versus forms through P, to coincide; when it
// holds the specialization pushes down to the hyperplanes through P and the
// two routes around the square agree.
struct GrassmannSpecialization {
  long n = 0;
  long r = 0;
  bool in_g0 = false;
  DVRLattice sat_ideal;
  DVRLattice sat_ambient;
  FMat<QField> spe_ideal;
  FMat<QField> spe_ambient;
  FMat<QField> rho_image;  // only populated when in_g0
  bool square_commutes = false;
};

inline GrassmannSpecialization grassmann_specialize(long n, const FMat<PiField>& basis) {
  PiField k;
  QField qf;
  GrassmannSpecialization out;
  out.n = n;
  out.r = static_cast<long>(basis.size());
  if (out.r == 0) throw config_error("grassmann: empty basis");
  const long width = gamma_basis_size(n, 2);
  for (const auto& row : basis) {
    if (static_cast<long>(row.size()) != width)
      throw config_error("grassmann: coefficient rows must match the gamma basis");
    for (const auto& c : row)
      if (!c.in_ring()) throw config_error("grassmann: coefficients must lie in the ring");
  }

  out.sat_ideal = dvr_saturate(basis);

  // the same vectors in the coordinates of the full degree-2 lattice: the
  // pi-marked basis element is pi times the missing monomial
  FMat<PiField> ambient = basis;
  for (auto& row : ambient) row.back() = k.mul(row.back(), DVRScalar::pi());
  out.sat_ambient = dvr_saturate(ambient);

  DVRLattice ideal_in_ambient = out.sat_ideal;
  for (auto& row : ideal_in_ambient.rows) row.back() = k.mul(row.back(), DVRScalar::pi());
  out.in_g0 = dvr_module_contains(ideal_in_ambient, out.sat_ambient.rows);

  auto reduce = [&](const FMat<PiField>& rows) {
    FMat<QField> red;
    for (const auto& row : rows) {
      std::vector<Rat> r;
      for (const auto& c : row) r.push_back(c.residue());
      red.push_back(std::move(r));
    }
    rref_in_place(qf, red);
    while (!red.empty()) {
      bool zero = true;
      for (const Rat& c : red.back())
        if (c != 0) zero = false;
      if (!zero) break;
      red.pop_back();
    }
    return red;
  };
  out.spe_ideal = reduce(out.sat_ideal.rows);
  out.spe_ambient = reduce(out.sat_ambient.rows);
  if (static_cast<long>(out.spe_ideal.size()) != out.r ||
      static_cast<long>(out.spe_ambient.size()) != out.r)
    throw config_error("grassmann: a saturation reduced to lower rank");

  if (out.in_g0) {
    // the ambient reduction must lie in the forms through P, and dropping
    // the killed class from the ideal side must land on the same subspace
    for (const auto& row : out.spe_ambient)
      if (row.back() != 0)
        throw config_error("grassmann: ambient specialization misses the point locus");
    FMat<QField> rho;
    for (const auto& row : out.spe_ideal)
      rho.push_back(std::vector<Rat>(row.begin(), row.end() - 1));
    if (frank(qf, rho) != out.r)
      throw config_error("grassmann: the point class lies in the specialized subspace");
    FMat<QField> ambient_cut;
    for (const auto& row : out.spe_ambient)
      ambient_cut.push_back(std::vector<Rat>(row.begin(), row.end() - 1));
    bool ok = true;
    for (const auto& row : rho)
      if (!in_row_span(qf, ambient_cut, row)) ok = false;
    for (const auto& row : ambient_cut)
      if (!in_row_span(qf, rho, row)) ok = false;
    out.square_commutes = ok;
    rref_in_place(qf, rho);
    out.rho_image = std::move(rho);
  }
  return out;
}

// ---------------------------------------------------------------------------
// built-in curve instances and the etale intersection check
// ---------------------------------------------------------------------------

enum class DVRFamily { semistable, smooth, diagonal };

// A plane V-curve with a marked special point, plus the recorded coordinate
// permutation aligning the gamma basis formulas, which put the point at
// (1:0:...:0), with the instance coordinates.
struct DVRInstance {
  DVRFamily family = DVRFamily::semistable;
  long n = 2;
  long p_slot = 0;              // instance coordinate that is 1 at the point
  std::vector<long> perm;       // gamma coordinate i is instance coordinate perm[i]
  MPoly<PiField> curve;
  std::string name;
};

inline DVRInstance make_instance(DVRFamily family) {
  PiField k;
  DVRInstance inst;
  inst.family = family;
  DVRScalar pi = DVRScalar::pi();
  if (family == DVRFamily::semistable) {
    // x0 x1 = pi x2^2, regular total space with a nodal special fibre at P
    inst.p_slot = 2;
    inst.perm = {2, 1, 0};
    inst.curve = mpoly::add(
        k, mpoly::term(k, 3, k.one(), {1, 1, 0}),
        mpoly::term(k, 3, k.neg(pi), {0, 0, 2}));
    inst.name = "semistable";
  } else if (family == DVRFamily::smooth) {
    // x0 x1 = x2^2, good reduction through P = (1:0:0)
    inst.p_slot = 0;
    inst.perm = {0, 1, 2};
    inst.curve = mpoly::add(
        k, mpoly::term(k, 3, k.one(), {1, 1, 0}),
        mpoly::term(k, 3, k.neg(k.one()), {0, 0, 2}));
    inst.name = "smooth";
  } else {
    throw config_error("instance: the diagonal family takes coefficients");
  }
  return inst;
}

inline DVRInstance make_diagonal_instance(const Rat& c0, const Rat& c1, const Rat& c2) {
  if (c0 == 0 || c1 == 0 || c2 == 0)
    throw config_error("instance: diagonal coefficients must be nonzero");
  PiField k;
  DVRInstance inst;
  inst.family = DVRFamily::diagonal;
  inst.p_slot = 2;
  inst.perm = {2, 1, 0};
  DVRScalar pic2 = k.mul(DVRScalar::pi(), DVRScalar(c2));
  inst.curve = mpoly::add(
      k,
      mpoly::add(k, mpoly::term(k, 3, DVRScalar(c0), {2, 0, 0}),
                 mpoly::term(k, 3, DVRScalar(c1), {0, 2, 0})),
      mpoly::term(k, 3, pic2, {0, 0, 2}));
  inst.name = "diagonal";
  return inst;
}

// Expands gamma basis coefficients into the actual degree-2 form on the
// instance coordinates, permutation applied and the pi mark honoured.
inline MPoly<PiField> form_from_gamma(const DVRInstance& inst,
                                      const std::vector<DVRScalar>& coeffs) {
  PiField k;
  GammaIdealBasis basis = gamma_ideal_basis(inst.n, 2);
  if (coeffs.size() != basis.elements.size())
    throw config_error("form: coefficient count must match the gamma basis");
  MPoly<PiField> out = mpoly::zero<PiField>(inst.n + 1);
  for (size_t b = 0; b < coeffs.size(); ++b) {
    if (!coeffs[b].in_ring()) throw config_error("form: coefficients must lie in the ring");
    if (coeffs[b].is_zero()) continue;
    std::vector<long> e(inst.n + 1, 0);
    for (long i = 0; i <= inst.n; ++i) e[inst.perm[i]] = basis.elements[b].exponent[i];
    DVRScalar c = coeffs[b];
    if (basis.elements[b].pi_marked) c = k.mul(c, DVRScalar::pi());
    mpoly::add_term(k, out, e, c);
  }
  return out;
}

// A seeded V-coefficient draw on the gamma basis; every resulting form
// vanishes at the marked point on the special fibre by construction.
inline std::vector<DVRScalar> sample_hyperplane_through_P(const DVRInstance& inst,
                                                          std::mt19937_64& rng) {
  std::vector<DVRScalar> coeffs;
  const long count = gamma_basis_size(inst.n, 2);
  for (long b = 0; b < count; ++b) {
    Rat a = Rat(static_cast<long>(rng() % 7) - 3);
    Rat bb = Rat(static_cast<long>(rng() % 7) - 3);
    QPi num{a, bb};
    qpi::trim(num);
    coeffs.push_back(DVRScalar(num, QPi{Rat(1)}));
  }
  return coeffs;
}

struct EtaleVerdict {
  bool conclusive = false;
  std::string reason;
  bool etale_over_K = false;
  bool nonempty = false;
  bool special_fibre_finite = false;
  long chart_degree_0 = -1;  // resultant degree on the x0 = 1 chart
  long chart_degree_1 = -1;  // and on the x1 = 1 chart
};

namespace detail {

// a homogeneous binary form in x0, x1 as (multiplicity of x0, dehomogenized
// univariate in x1); only the gcd structure matters here
struct BinaryForm {
  long x0_mult = 0;
  UPoly<QField> part;
};

inline BinaryForm binary_of(const QField& k, const MPoly<QField>& m, long hom_deg) {
  UPoly<QField> p(static_cast<size_t>(hom_deg + 1), k.zero());
  for (const auto& [e, c] : m.terms) p[e[1]] = c;
  upoly::trim(k, p);
  BinaryForm out;
  out.part = p;
  out.x0_mult = upoly::is_zero(p) ? 0 : hom_deg - upoly::deg(p);
  return out;
}

inline BinaryForm binary_gcd(const QField& k, const BinaryForm& a, const BinaryForm& b) {
  BinaryForm out;
  out.x0_mult = std::min(a.x0_mult, b.x0_mult);
  out.part = upoly::gcd(k, a.part, b.part);
  return out;
}

inline bool binary_nonconstant(const BinaryForm& b) {
  return b.x0_mult > 0 || upoly::deg(b.part) >= 1;
}

// whether two nonzero ternary polynomials over k share a nonconstant
// factor: a common factor free of x2 divides both x2-contents, and a common
// factor involving x2 forces the true-degree resultant to vanish
inline bool ternary_common_factor(const QField& k, const MPoly<QField>& f,
                                  const MPoly<QField>& g, long deg_f, long deg_g) {
  auto fc = mpoly::collect(k, f, 2);
  auto gc = mpoly::collect(k, g, 2);
  auto content = [&](const std::vector<MPoly<QField>>& coeffs, long hom_deg) {
    BinaryForm acc;
    bool first = true;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      if (mpoly::is_zero(coeffs[j])) continue;
      BinaryForm b = binary_of(k, coeffs[j], hom_deg - static_cast<long>(j));
      acc = first ? b : binary_gcd(k, acc, b);
      first = false;
    }
    return acc;
  };
  if (binary_nonconstant(binary_gcd(k, content(fc, deg_f), content(gc, deg_g))))
    return true;
  const long mf = static_cast<long>(fc.size()) - 1;
  const long mg = static_cast<long>(gc.size()) - 1;
  if (mf < 1 || mg < 1) return false;
  // resultant on the x0 = 1 chart; a homogeneous resultant vanishing there
  // vanishes identically
  QField qf;
  auto chartify = [&](const std::vector<MPoly<QField>>& coeffs) {
    std::vector<UPoly<QField>> out;
    for (const auto& c : coeffs) {
      MPoly<QField> sub = mpoly::substitute(qf, c, 0, qf.one());
      out.push_back(mpoly::to_upoly(qf, sub, 1));
    }
    return out;
  };
  return upoly::is_zero(sylvester_resultant(qf, chartify(fc), chartify(gc)));
}

// Squarefreeness of a resultant over Q(pi). The generic Euclid runs in the
// fraction field, where every remainder step stacks fractions and each
// reduction runs a rational gcd on ever larger polynomials in pi; a degree
// four input already takes tens of seconds that way. Squarefreeness only
// depends on the polynomial up to a nonzero scalar, so clear denominators
// and test Res(p, p') != 0 over Q[pi], with the determinant computed by
// fraction free Bareiss elimination so no entry ever leaves the ring.
inline bool pi_squarefree(const UPoly<PiField>& a) {
  const long n = upoly::deg(a);
  if (n <= 1) return true;
  QPi common{Rat(1)};
  for (const auto& c : a)
    if (!c.is_zero())
      common = qpi::mul(qpi::divmod(common, qpi::gcd(common, c.den())).first, c.den());
  std::vector<QPi> p(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero())
      p[i] = qpi::mul(a[i].num(), qpi::divmod(common, a[i].den()).first);
  std::vector<QPi> dp(static_cast<size_t>(n));
  for (long i = 1; i <= n; ++i) dp[i - 1] = qpi::scale(p[i], Rat(i));

  const long rows = 2 * n - 1;
  std::vector<std::vector<QPi>> m(rows, std::vector<QPi>(rows));
  for (long i = 0; i < n - 1; ++i)
    for (long j = 0; j <= n; ++j) m[i][i + j] = p[n - j];
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= n - 1; ++j) m[n - 1 + i][i + j] = dp[n - 1 - j];

  QPi prev{Rat(1)};
  for (long c = 0; c < rows; ++c) {
    long piv = c;
    while (piv < rows && qpi::is_zero(m[piv][c])) ++piv;
    if (piv == rows) return false;  // the resultant vanishes
    if (piv != c) std::swap(m[piv], m[c]);  // a sign flip cannot affect a zero test
    for (long r = c + 1; r < rows; ++r) {
      for (long j = c + 1; j < rows; ++j)
        m[r][j] = qpi::divmod(
                      qpi::sub(qpi::mul(m[c][c], m[r][j]), qpi::mul(m[r][c], m[c][j])),
                      prev)
                      .first;
      m[r][c] = {};
    }
    prev = m[c][c];
  }
  return true;
}

}  // namespace detail

// The construction shrinks the hyperplanes through P to a dense open in
// several stages, and at this scale two of those stages have equations the
// harness can evaluate exactly. The first keeps the cut regular at the
// marked point: inside the cotangent space of the ambient local ring at P,
// spanned by the two chart coordinates and pi, the classes of the curve
// equation and of the specialized form must be independent. The second
// keeps the special fibre of the cut finite: the specialized form must
// share no component with the reduced curve. Together with the G'0 flag,
// which says the specialization lands among the hyperplanes through P at
// all, these make up the computed good locus. The remaining stage, the
// open governing etale behaviour away from P, has no explicit equations
// and is exactly what the sampling harness probes empirically.
struct GoodLocusReport {
  bool in_hp = false;             // G'0 holds, the specialization lies in H_P
  bool regular_at_p = false;      // the cut stays regular at the marked point
  bool reduction_finite = false;  // the reduced cut shares no component
  bool member = false;
  std::vector<DVRScalar> saturated;  // canonical V-representative of the form
  std::vector<Rat> spe;              // its residues in gamma basis order
};

inline GoodLocusReport good_locus_check(const DVRInstance& inst,
                                        const std::vector<DVRScalar>& coeffs) {
  PiField k;
  QField qf;
  GoodLocusReport out;
  GrassmannSpecialization g = grassmann_specialize(inst.n, {coeffs});
  out.saturated = g.sat_ideal.rows.at(0);
  for (const auto& c : out.saturated) out.spe.push_back(c.residue());
  out.in_hp = g.in_g0;
  if (!out.in_hp) return out;

  GammaIdealBasis basis = gamma_ideal_basis(inst.n, 2);

  // class of the curve equation at P in the coordinates (chart vars, pi):
  // freeze the chart coordinate, split terms by degree in the others, and
  // keep the linear coefficients plus the pi-derivative of the constant part
  MPoly<PiField> curve_aff = mpoly::substitute(k, inst.curve, inst.p_slot, k.one());
  std::vector<DVRScalar> lin(inst.n + 1, k.zero());
  DVRScalar f0 = k.zero();
  for (const auto& [e, c] : curve_aff.terms) {
    long delta = 0, var = -1;
    for (long v = 0; v <= inst.n; ++v)
      if (v != inst.p_slot && e[v] != 0) {
        delta += e[v];
        var = v;
      }
    if (delta == 0) f0 = k.add(f0, c);
    else if (delta == 1) lin[var] = k.add(lin[var], c);
  }
  if (f0.residue() != 0)
    throw config_error("good locus: the marked point does not lie on the curve");
  auto pi_derivative_at_zero = [](const DVRScalar& a) {
    const QPi& nu = a.num();
    const QPi& de = a.den();
    Rat n0 = qpi::eval0(nu), d0 = qpi::eval0(de);
    Rat n1 = qpi::deg(nu) >= 1 ? nu[1] : Rat(0);
    Rat d1 = qpi::deg(de) >= 1 ? de[1] : Rat(0);
    return (n1 * d0 - n0 * d1) / (d0 * d0);
  };
  std::vector<Rat> curve_class, form_class;
  for (long i = 1; i <= inst.n; ++i) curve_class.push_back(lin[inst.perm[i]].residue());
  curve_class.push_back(pi_derivative_at_zero(f0));

  // class of the specialized form in the same coordinates: the basis
  // elements x0*x_i carry the chart-linear part and the pi-marked element
  // carries the pi component
  form_class.assign(inst.n + 1, Rat(0));
  for (size_t b = 0; b < basis.elements.size(); ++b) {
    const auto& el = basis.elements[b];
    if (el.pi_marked) {
      form_class[inst.n] += out.spe[b];
    } else if (el.exponent[0] == 1) {
      for (long i = 1; i <= inst.n; ++i)
        if (el.exponent[i] == 1) form_class[i - 1] += out.spe[b];
    }
  }
  FMat<QField> classes{curve_class, form_class};
  out.regular_at_p = frank(qf, classes) == 2;

  // the reduced cut: both curves over the residue field, no shared factor
  MPoly<QField> fbar = mpoly::zero<QField>(inst.n + 1);
  for (const auto& [e, c] : inst.curve.terms) mpoly::add_term(qf, fbar, e, c.residue());
  MPoly<QField> lbar = mpoly::zero<QField>(inst.n + 1);
  for (size_t b = 0; b < basis.elements.size(); ++b) {
    if (basis.elements[b].pi_marked || out.spe[b] == 0) continue;
    std::vector<long> e(inst.n + 1, 0);
    for (long i = 0; i <= inst.n; ++i)
      e[inst.perm[i]] = basis.elements[b].exponent[i];
    mpoly::add_term(qf, lbar, e, out.spe[b]);
  }
  if (mpoly::is_zero(fbar) || mpoly::is_zero(lbar)) {
    out.reduction_finite = false;
  } else {
    out.reduction_finite = !detail::ternary_common_factor(qf, fbar, lbar, 2, 2);
  }
  out.member = out.in_hp && out.regular_at_p && out.reduction_finite;
  return out;
}

// Cuts the instance curve with each form and reports on the generic-fibre
// intersection. The elimination runs against x2, whose top coefficient in
// every built-in family is a nonzero constant, so each projective root of
// the resultant is a genuine intersection point and a squarefree resultant
// in both affine charts certifies an etale intersection over K. A
// degenerate elimination is reported as inconclusive, never as a pass.
inline std::vector<EtaleVerdict> etale_check_curve_intersection(
    const DVRInstance& inst, const std::vector<std::vector<DVRScalar>>& forms) {
  PiField k;
  QField qf;
  std::vector<EtaleVerdict> out;
  auto fc = mpoly::collect(k, inst.curve, 2);
  bool top_constant = fc.size() == 3 && fc[2].terms.size() == 1 &&
                      fc[2].terms.begin()->first == std::vector<long>(3, 0);
  if (!top_constant)
    throw config_error("etale: the curve needs a constant leading x2 coefficient");

  for (const auto& coeffs : forms) {
    EtaleVerdict v;
    MPoly<PiField> L = form_from_gamma(inst, coeffs);
    if (mpoly::is_zero(L)) {
      v.reason = "the form is zero";
      out.push_back(v);
      continue;
    }
    const long mL = mpoly::degree_in(L, 2);
    if (mL < 1) {
      v.reason = "the form does not involve the eliminated coordinate";
      out.push_back(v);
      continue;
    }
    auto lc = mpoly::collect(k, L, 2);

    auto chart_poly = [&](long fixed_var, long free_var) {
      auto chartify = [&](const std::vector<MPoly<PiField>>& coeffs2) {
        std::vector<UPoly<PiField>> cs;
        for (const auto& c : coeffs2) {
          MPoly<PiField> sub = mpoly::substitute(k, c, fixed_var, k.one());
          cs.push_back(mpoly::to_upoly(k, sub, free_var));
        }
        return cs;
      };
      return sylvester_resultant(k, chartify(fc), chartify(lc));
    };
    UPoly<PiField> g0 = chart_poly(0, 1);
    UPoly<PiField> g1 = chart_poly(1, 0);
    v.chart_degree_0 = upoly::deg(g0);
    v.chart_degree_1 = upoly::deg(g1);
    if (upoly::is_zero(g0) || upoly::is_zero(g1)) {
      v.reason = "the resultant vanishes identically, the curves share a component";
      out.push_back(v);
      continue;
    }
    v.conclusive = true;
    v.etale_over_K = detail::pi_squarefree(g0) && detail::pi_squarefree(g1);
    v.nonempty = std::max(v.chart_degree_0, v.chart_degree_1) >= 1;

    // the special fibre: reduce both curves and ask for a common component
    auto reduce_mpoly = [&](const MPoly<PiField>& m) {
      MPoly<QField> red = mpoly::zero<QField>(m.vars);
      for (const auto& [e, c] : m.terms) mpoly::add_term(qf, red, e, c.residue());
      return red;
    };
    MPoly<QField> fbar = reduce_mpoly(inst.curve);
    MPoly<QField> lbar = reduce_mpoly(L);
    if (mpoly::is_zero(lbar)) {
      v.special_fibre_finite = false;
    } else {
      v.special_fibre_finite = !detail::ternary_common_factor(qf, fbar, lbar, 2, 2);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace logbertini
