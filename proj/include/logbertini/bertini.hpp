#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/chart.hpp"
#include "logbertini/linalg.hpp"
#include "logbertini/logalg.hpp"
#include "logbertini/util.hpp"

namespace logbertini {

// ---------------------------------------------------------------------------
// hyperplane sections of a chart algebra
// ---------------------------------------------------------------------------

// r hyperplanes u0 + sum u_i f_i cutting the algebra, with coefficients
// over the base field. Symbolic runs leave the coefficient list empty.
struct SectionSpec {
  ChartAlgebra<GF> algebra;
  std::vector<PolyFunc<GF>> f_list;
  long r = 1;
  std::vector<std::vector<GF::Elem>> coefficients;
};

inline SectionSpec make_section_spec(ChartAlgebra<GF> algebra,
                                     std::vector<PolyFunc<GF>> f_list, long r,
                                     std::vector<std::vector<GF::Elem>> coefficients) {
  if (r < 0) throw config_error("section spec: negative hyperplane count");
  if (!coefficients.empty()) {
    if (static_cast<long>(coefficients.size()) != r)
      throw config_error("section spec: need one coefficient row per hyperplane");
    for (const auto& row : coefficients)
      if (row.size() != f_list.size() + 1)
        throw config_error("section spec: coefficient row width must be n + 1");
  }
  return SectionSpec{std::move(algebra), std::move(f_list), r, std::move(coefficients)};
}

// The same data over F_{q^m}, everything pushed through one fixed embedding.
struct ExtendedScene {
  GF base;
  GF::Elem root = 0;       // image of the base generator; unused when trivial
  bool trivial = true;     // m = 1: the embedding is the identity
  ChartAlgebra<GF> algebra;
  std::vector<PolyFunc<GF>> f_list;
  std::vector<std::vector<GF::Elem>> coefficients;
};

inline GF::Elem scene_lift(const ExtendedScene& sc, GF::Elem a) {
  return sc.trivial ? a : sc.base.embed(sc.algebra.field, sc.root, a);
}

inline std::vector<GF::Elem> scene_lift_row(const ExtendedScene& sc,
                                            const std::vector<GF::Elem>& row) {
  std::vector<GF::Elem> out;
  out.reserve(row.size());
  for (GF::Elem a : row) out.push_back(scene_lift(sc, a));
  return out;
}

inline ExtendedScene extend_scene(const SectionSpec& spec, long m) {
  if (m < 1) throw config_error("scene: extension degree must be positive");
  const GF& base = spec.algebra.field;
  GF big(base.p(), base.degree() * m);
  ExtendedScene sc{base, 0, m == 1,
                   make_chart_algebra(big, spec.algebra.chart, spec.algebra.smooth_vars,
                                      spec.algebra.log_smooth_declared),
                   {}, {}};
  if (!sc.trivial) sc.root = base.embedding_root(big);
  for (const PolyFunc<GF>& f : spec.f_list) {
    PolyFunc<GF> g;
    for (const MonomialTerm<GF>& t : f)
      g.push_back(MonomialTerm<GF>{scene_lift(sc, t.coeff), t.p_exponent, t.w_exponent});
    sc.f_list.push_back(std::move(g));
  }
  for (const auto& row : spec.coefficients) sc.coefficients.push_back(scene_lift_row(sc, row));
  return sc;
}

inline bool on_section(const ExtendedScene& sc, const std::vector<GF::Elem>& row,
                       const std::vector<GF::Elem>& fvals) {
  const GF& k = sc.algebra.field;
  GF::Elem v = row[0];
  for (size_t i = 0; i < fvals.size(); ++i) v = k.add(v, k.mul(row[i + 1], fvals[i]));
  return k.is_zero(v);
}

inline std::vector<AlgebraPoint<GF>> section_points(const SectionSpec& spec, long m,
                                                    long budget = 10000000) {
  ExtendedScene sc = extend_scene(spec, m);
  std::vector<AlgebraPoint<GF>> out;
  for (AlgebraPoint<GF>& z : enumerate_points(sc.algebra, budget)) {
    std::vector<GF::Elem> fvals;
    for (const PolyFunc<GF>& f : sc.f_list) fvals.push_back(evaluate(sc.algebra, f, z));
    bool keep = true;
    for (const auto& row : sc.coefficients)
      if (!on_section(sc, row, fvals)) { keep = false; break; }
    if (keep) out.push_back(std::move(z));
  }
  return out;
}

// Non-degenerate coefficient rows: full rank r, equivalently some r x r
// minor invertible, equivalently the wedge spans a direct summand.
inline bool nondegeneracy_check(const GF& k, const std::vector<std::vector<GF::Elem>>& rows) {
  if (rows.empty()) return true;
  const long r = static_cast<long>(rows.size());
  const long width = static_cast<long>(rows[0].size());
  if (r > width) throw config_error("nondegeneracy: more hyperplanes than coefficients");
  for (const auto& row : rows)
    if (static_cast<long>(row.size()) != width)
      throw config_error("nondegeneracy: ragged coefficient rows");
  FMat<GF> m = rows;
  return frank(k, m) == r;
}

// ---------------------------------------------------------------------------
// sharpness certificates at enumerated points
// ---------------------------------------------------------------------------

enum class SharpCertificate { certified, needs_extension, failed };

// At a point with support face F the stalk's sharp monoid is P/F and the
// chart generator splits into a unit on F and a lift of its image. The
// construction of the twisted chart then decides sharpness there; a missing
// prime-to-p root only means the residue field is too small, while the
// characteristic-part failure is genuine.
inline SharpCertificate sharp_certificate_at_point(const ChartAlgebra<GF>& a,
                                                   const AlgebraPoint<GF>& z,
                                                   std::string* note = nullptr) {
  if (!a.relation_active) return SharpCertificate::certified;
  const GF& k = a.field;
  const AffineMonoid& p = a.chart.target;
  std::vector<long> support;
  for (long i = 0; i < p.generator_count(); ++i)
    if (!k.is_zero(z.monoid_values[i])) support.push_back(i);
  try {
    Face face = make_face(p, support);
    SharpQuotient sq = sharp_quotient_at_face(p, face);
    std::vector<Int> cbar = sq.project(sq.to_gp(a.relation));
    std::vector<Int> lift = sq.lift_to_ambient(cbar);
    std::vector<Int> unit_part(lift.size());
    for (size_t j = 0; j < lift.size(); ++j) unit_part[j] = a.relation[j] - lift[j];

    std::vector<std::vector<Int>> fgens;
    for (long i : face.member_indices) fgens.push_back(p.generators[i]);
    auto coords = solve_left(unit_part, IntMat::from_rows(fgens, p.ambient_rank));
    if (!coords) throw std::logic_error("sharp certificate: unit part outside the face group");
    GF::Elem u = k.one();
    for (size_t j = 0; j < coords->size(); ++j)
      u = k.mul(u, k.pow(z.monoid_values[face.member_indices[j]], (*coords)[j]));

    IntMat qbasis = groupification(sq.quotient);
    auto exps = solve_left(cbar, qbasis);
    if (!exps) throw std::logic_error("sharp certificate: image outside the quotient group");
    auto chart = construct_chart_satz1(sq.quotient, *exps, u, k);
    if (chart.success) return SharpCertificate::certified;
    if (note) *note = chart.failure_reason;
    return SharpCertificate::failed;
  } catch (const unsupported_field_error&) {
    return SharpCertificate::needs_extension;
  } catch (const config_error& e) {
    if (note) *note = e.what();
    return SharpCertificate::failed;
  }
}

// ---------------------------------------------------------------------------
// the verification harness
// ---------------------------------------------------------------------------

enum class SectionVerdict { log_smooth_everywhere, fails_somewhere, empty_section };

struct PointFailure {
  long degree = 1;
  AlgebraPoint<GF> point;                      // over F_{q^degree}
  std::vector<std::vector<GF::Elem>> fibers;   // the offending differential fibers
};

struct HyperplaneReport {
  std::vector<std::vector<GF::Elem>> coefficients;  // base field; empty when symbolic
  std::vector<long> points_by_degree;               // section points, index m - 1
  std::vector<PointFailure> failures;
  SectionVerdict verdict = SectionVerdict::empty_section;
  bool unramified_ok = true;
  long undecided_sharpness = 0;  // certificates that would need a field extension
};

struct BertiniOptions {
  enum class Mode { exhaustive, sample, symbolic } mode = Mode::exhaustive;
  long trials = 0;            // sample mode only
  long max_extension = 3;
  std::uint64_t seed = 0;
  bool sharpness_waiver = false;  // counterexample study: skip the refusal
  long point_budget = 10000000;
  long hyperplane_budget = 1000000;
  long workers = 1;           // per-hyperplane reports run independently
};

struct BertiniRun {
  std::vector<HyperplaneReport> reports;
  std::uint64_t seed = 0;
  std::string algorithm_version;
  long smooth_count = 0;
  long failing_count = 0;
  long empty_count = 0;
};

namespace detail {

// everything about one extension degree that hyperplanes share
struct DegreeData {
  ExtendedScene scene;
  OmegaFiber<GF> om;
  std::vector<AlgebraPoint<GF>> points;
  std::vector<std::vector<GF::Elem>> fvals;  // per point: f_1(z)..f_n(z)
  std::vector<FMat<GF>> dfibers;             // per point: n rows of df_i fibers
  std::vector<bool> unramified;
  std::vector<SharpCertificate> certs;
};

inline DegreeData build_degree_data(const SectionSpec& spec, long m, long budget) {
  DegreeData dd{extend_scene(spec, m), {}, {}, {}, {}, {}, {}};
  const ChartAlgebra<GF>& a = dd.scene.algebra;
  const GF& k = a.field;
  dd.points = enumerate_points(a, budget);
  AlgebraPoint<GF> probe;
  probe.monoid_values.assign(a.chart.target.generator_count(), k.zero());
  probe.w_values.assign(a.smooth_vars, k.zero());
  dd.om = omega_fiber(a, probe);

  // the classical part of the log cotangent fiber: images of the algebra
  // generator differentials. Unramifiedness of f demands the df_i span it;
  // this is a necessary desk-scale test (the full classical cotangent is
  // not presented here).
  const long dim = dd.om.dimension;
  for (const AlgebraPoint<GF>& z : dd.points) {
    std::vector<GF::Elem> fv;
    FMat<GF> rows;
    for (const PolyFunc<GF>& f : dd.scene.f_list) {
      fv.push_back(evaluate(a, f, z));
      rows.push_back(differential_fiber(a, dd.om, f, z));
    }
    FMat<GF> classical;
    for (const std::vector<Int>& g : a.chart.target.generators) {
      PolyFunc<GF> mono = {MonomialTerm<GF>{k.one(), g, std::vector<long>(a.smooth_vars, 0)}};
      classical.push_back(differential_fiber(a, dd.om, mono, z));
    }
    for (long j = 0; j < a.smooth_vars; ++j) {
      std::vector<GF::Elem> e(dim, k.zero());
      e[dd.om.surviving.size() + j] = k.one();
      classical.push_back(std::move(e));
    }
    dd.unramified.push_back(frank(k, rows) == frank(k, classical));
    dd.fvals.push_back(std::move(fv));
    dd.dfibers.push_back(std::move(rows));
    dd.certs.push_back(sharp_certificate_at_point(a, z));
  }
  return dd;
}

inline SectionVerdict verdict_of(const HyperplaneReport& rep) {
  long total = 0;
  for (long c : rep.points_by_degree) total += c;
  if (total == 0) return SectionVerdict::empty_section;
  return rep.failures.empty() ? SectionVerdict::log_smooth_everywhere
                              : SectionVerdict::fails_somewhere;
}

}  // namespace detail

// Checks every point of every hyperplane section over F_{q^m}, m <= M. The
// generic hyperplane is operationalized per mode: exhaustive over the base
// field, seeded uniform sampling, or symbolic coefficients where log
// smoothness for a generic section through a point means the df_i fibers
// reach rank r. The harness refuses to run without the log-smoothness
// declaration and per-point sharpness certificates unless the waiver for
// counterexample study is set.
inline BertiniRun verify_log_bertini(const SectionSpec& spec, const BertiniOptions& opt) {
  const GF& k = spec.algebra.field;
  if (!opt.sharpness_waiver && !spec.algebra.log_smooth_declared)
    throw config_error("bertini: algebra is not declared log smooth; set the counterexample "
                       "waiver to study it anyway");
  if (opt.max_extension < 1) throw config_error("bertini: max extension must be positive");
  const long n = static_cast<long>(spec.f_list.size());
  const long width = n + 1;

  std::vector<detail::DegreeData> degrees;
  for (long m = 1; m <= opt.max_extension; ++m)
    degrees.push_back(detail::build_degree_data(spec, m, opt.point_budget));

  if (!opt.sharpness_waiver) {
    for (const auto& dd : degrees)
      for (size_t i = 0; i < dd.points.size(); ++i)
        if (dd.certs[i] == SharpCertificate::failed)
          throw config_error("bertini: sharpness certificate failed at an enumerated point; "
                             "set the counterexample waiver to study it anyway");
  }

  BertiniRun run;
  run.seed = opt.seed;
  run.algorithm_version = "bertini-harness-1";

  auto examine = [&](const std::vector<std::vector<GF::Elem>>& coeff_rows) {
    HyperplaneReport rep;
    rep.coefficients = coeff_rows;
    rep.points_by_degree.assign(degrees.size(), 0);
    for (size_t di = 0; di < degrees.size(); ++di) {
      const detail::DegreeData& dd = degrees[di];
      const GF& ext = dd.scene.algebra.field;
      std::vector<std::vector<GF::Elem>> rows;
      for (const auto& row : coeff_rows) rows.push_back(scene_lift_row(dd.scene, row));
      for (size_t pi = 0; pi < dd.points.size(); ++pi) {
        bool on = true;
        for (const auto& row : rows)
          if (!on_section(dd.scene, row, dd.fvals[pi])) { on = false; break; }
        if (!on) continue;
        ++rep.points_by_degree[di];
        if (!dd.unramified[pi]) rep.unramified_ok = false;
        if (dd.certs[pi] == SharpCertificate::needs_extension) ++rep.undecided_sharpness;
        FMat<GF> fibers;
        for (const auto& row : rows) {
          std::vector<GF::Elem> fib(dd.om.dimension, ext.zero());
          for (long i = 0; i < n; ++i)
            for (long s = 0; s < dd.om.dimension; ++s)
              fib[s] = ext.add(fib[s], ext.mul(row[i + 1], dd.dfibers[pi][i][s]));
          fibers.push_back(std::move(fib));
        }
        if (frank(ext, fibers) < static_cast<long>(coeff_rows.size()))
          rep.failures.push_back(PointFailure{static_cast<long>(di + 1), dd.points[pi],
                                              fibers});
      }
    }
    rep.verdict = detail::verdict_of(rep);
    return rep;
  };

  auto tally = [&](std::vector<HyperplaneReport> reports) {
    for (auto& rep : reports) {
      switch (rep.verdict) {
        case SectionVerdict::log_smooth_everywhere: ++run.smooth_count; break;
        case SectionVerdict::fails_somewhere: ++run.failing_count; break;
        case SectionVerdict::empty_section: ++run.empty_count; break;
      }
      run.reports.push_back(std::move(rep));
    }
  };

  if (opt.mode == BertiniOptions::Mode::symbolic) {
    // A generic tuple of hyperplanes through a point cuts log-smoothly
    // there exactly when the df_i fibers reach rank r; every enumerated
    // point lies on some tuple through it, so all points are examined.
    HyperplaneReport rep;
    rep.points_by_degree.assign(degrees.size(), 0);
    for (size_t di = 0; di < degrees.size(); ++di) {
      const detail::DegreeData& dd = degrees[di];
      for (size_t pi = 0; pi < dd.points.size(); ++pi) {
        ++rep.points_by_degree[di];
        if (!dd.unramified[pi]) rep.unramified_ok = false;
        if (dd.certs[pi] == SharpCertificate::needs_extension) ++rep.undecided_sharpness;
        if (frank(dd.scene.algebra.field, dd.dfibers[pi]) < spec.r)
          rep.failures.push_back(
              PointFailure{static_cast<long>(di + 1), dd.points[pi], dd.dfibers[pi]});
      }
    }
    rep.verdict = detail::verdict_of(rep);
    tally({std::move(rep)});
    return run;
  }

  if (opt.mode == BertiniOptions::Mode::exhaustive) {
    Int space = 1;
    for (long i = 0; i < spec.r * width; ++i) {
      space *= k.order();
      if (space > opt.hyperplane_budget)
        throw resource_error("bertini: exhaustive hyperplane space exceeds the budget");
    }
    const long total = static_cast<long>(space);
    const long q = k.order();
    tally(parallel_map(total, opt.workers, [&](long t) {
      // tuple t in mixed radix, row-major with the first coefficient in
      // the lowest digit, matching the enumeration order of a nested loop
      std::vector<std::vector<GF::Elem>> rows;
      long code = t;
      for (long j = 0; j < spec.r; ++j) {
        std::vector<GF::Elem> row;
        for (long i = 0; i < width; ++i) {
          row.push_back(static_cast<GF::Elem>(code % q));
          code /= q;
        }
        rows.push_back(std::move(row));
      }
      return examine(rows);
    }));
    return run;
  }

  // sample mode: draws stay over the base field so every coefficient
  // embeds into each extension degree, and each trial owns a PRNG stream
  // split from the root seed, making the trials independent tasks
  const long trials = opt.trials < 0 ? 0 : opt.trials;
  tally(parallel_map(trials, opt.workers, [&](long t) {
    std::mt19937_64 rng(split_seed(opt.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::vector<GF::Elem>> rows;
    for (long j = 0; j < spec.r; ++j) {
      std::vector<GF::Elem> row;
      for (long i = 0; i < width; ++i)
        row.push_back(static_cast<GF::Elem>(rng() % k.order()));
      rows.push_back(std::move(row));
    }
    return examine(rows);
  }));
  return run;
}

// ---------------------------------------------------------------------------
// abstract rank check and subspace position
// ---------------------------------------------------------------------------

// E presents a rank-d quotient of the differential fiber by d rows applied
// to fiber coordinates; the result is the corank of the section
// differentials inside E at the point, expected d - r at good points.
inline long abstract_rank_check(const GF& k, const FMat<GF>& e_rows,
                                const FMat<GF>& section_fibers) {
  const long d = static_cast<long>(e_rows.size());
  FMat<GF> phi;
  for (const auto& fib : section_fibers) {
    std::vector<GF::Elem> img;
    for (const auto& row : e_rows) {
      if (row.size() != fib.size()) throw config_error("rank check: dimension mismatch");
      GF::Elem acc = k.zero();
      for (size_t s = 0; s < row.size(); ++s) acc = k.add(acc, k.mul(row[s], fib[s]));
      img.push_back(acc);
    }
    phi.push_back(std::move(img));
  }
  return d - frank(k, phi);
}

// True when no nonzero element of the span of s_basis lies in the span of
// the forms, i.e. the sum of the two spans is direct.
inline bool subspace_injects(const GF& k, const FMat<GF>& s_basis, const FMat<GF>& forms) {
  FMat<GF> stacked = forms;
  stacked.insert(stacked.end(), s_basis.begin(), s_basis.end());
  return frank(k, stacked) == frank(k, s_basis) + frank(k, forms);
}

struct SubspaceReport {
  long trials = 0;
  long degenerate_skipped = 0;
  long failures = 0;
  std::uint64_t seed = 0;
};

// Samples non-degenerate r-tuples of forms and counts how often the given
// subspace meets their span; generically this should never happen when
// dim S <= width - r.
inline SubspaceReport generic_subspace_injectivity(const GF& k, const FMat<GF>& s_basis,
                                                   long width, long r, long trials,
                                                   std::uint64_t seed) {
  if (static_cast<long>(s_basis.size()) > width - r)
    throw config_error("subspace check: dim S must be at most width - r");
  for (const auto& row : s_basis)
    if (static_cast<long>(row.size()) != width)
      throw config_error("subspace check: basis width mismatch");
  SubspaceReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  for (long t = 0; t < trials; ++t) {
    ++rep.trials;
    FMat<GF> forms;
    for (long j = 0; j < r; ++j) {
      std::vector<GF::Elem> row;
      for (long i = 0; i < width; ++i)
        row.push_back(static_cast<GF::Elem>(rng() % k.order()));
      forms.push_back(std::move(row));
    }
    if (!nondegeneracy_check(k, forms)) {
      ++rep.degenerate_skipped;
      continue;
    }
    if (!subspace_injects(k, s_basis, forms)) ++rep.failures;
  }
  return rep;
}

}  // namespace logbertini
