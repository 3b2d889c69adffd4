#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "logbertini/logalg.hpp"

using namespace logbertini;

namespace {

AffineMonoid mono(long ambient, std::vector<std::vector<Int>> gens) {
  return AffineMonoid{ambient, std::move(gens)};
}

// chart of the running counterexample: N -> N + Z, 1 -> (p, 1), with the
// target presented by t, u, and u^{-1}
ChartAlgebra<GF> cx_algebra(long p, long m) {
  AffineMonoid q = mono(1, {{1}});
  AffineMonoid target = mono(2, {{1, 0}, {0, 1}, {0, -1}});
  MonoidHom h = make_hom(q, target, {{Int(p), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), 0, true);
}

// the node x*y = 0 with its standard chart N -> N^2, 1 -> (1,1)
ChartAlgebra<GF> node_algebra(long p, long m, long smooth_vars = 0) {
  AffineMonoid q = mono(1, {{1}});
  AffineMonoid target = mono(2, {{1, 0}, {0, 1}});
  MonoidHom h = make_hom(q, target, {{Int(1), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), smooth_vars, true);
}

// trivial log structure: the base generator is 0, so nothing is killed
ChartAlgebra<GF> trivial_algebra(long p, long m, long smooth_vars) {
  AffineMonoid q = mono(1, {{0}});
  AffineMonoid target = mono(0, {});
  MonoidHom h = make_hom(q, target, {{}});
  return make_chart_algebra(GF(p, m), std::move(h), smooth_vars, false);
}

template <class K>
MonomialTerm<K> term(const K& k, long c, std::vector<Int> pe, std::vector<long> we = {}) {
  return MonomialTerm<K>{k.from_int(Int(c)), std::move(pe), std::move(we)};
}

}  // namespace

TEST_CASE("chart algebra construction validates the chart") {
  AffineMonoid q = mono(1, {{1}});
  // generator mapping to zero would kill the unit monomial
  CHECK_THROWS_AS(
      make_chart_algebra(GF(3, 1), make_hom(q, mono(2, {{1, 0}, {0, 1}}), {{Int(0), Int(0)}}),
                         0, false),
      config_error);
  // generator mapping to an invertible element likewise
  CHECK_THROWS_AS(
      make_chart_algebra(GF(3, 1),
                         make_hom(q, mono(2, {{1, 0}, {0, 1}, {0, -1}}), {{Int(0), Int(1)}}), 0,
                         false),
      config_error);
  // two base generators are not a log point chart
  CHECK_THROWS_AS(
      make_chart_algebra(GF(3, 1),
                         make_hom(mono(2, {{1, 0}, {0, 1}}), mono(2, {{1, 0}, {0, 1}}),
                                  {{Int(1), Int(0)}, {Int(0), Int(1)}}),
                         0, false),
      config_error);
  // declared log smooth needs the arithmetic criterion: multiplication by p
  // on N fails it in characteristic p
  CHECK_THROWS_AS(
      make_chart_algebra(GF(5, 1), make_hom(q, mono(1, {{1}}), {{Int(5)}}), 0, true),
      config_error);
  CHECK_NOTHROW(
      make_chart_algebra(GF(3, 1), make_hom(q, mono(1, {{1}}), {{Int(5)}}), 0, true));
}

TEST_CASE("point validation checks face support, not just a relation basis") {
  // generators 1, 1, 2 of N: the support of an assignment like (0, 0, c)
  // satisfies any relation basis vacuously yet extends to no monoid hom
  AffineMonoid q = mono(1, {{0}});
  AffineMonoid p = mono(1, {{1}, {1}, {2}});
  MonoidHom h = make_hom(q, p, {{Int(0)}});
  auto a = make_chart_algebra(GF(7, 1), h, 0, false);
  FaceData fd = build_face_data(p);
  const GF& k = a.field;

  auto pt = [&](long x, long y, long z) {
    return AlgebraPoint<GF>{{k.from_int(x), k.from_int(y), k.from_int(z)}, {}};
  };
  std::string why;
  CHECK_FALSE(point_invariants_hold(a, fd, pt(0, 0, 5), &why));
  CHECK(why == "support is not the generator set of a face");
  CHECK(point_invariants_hold(a, fd, pt(0, 0, 0)));
  CHECK(point_invariants_hold(a, fd, pt(3, 3, 2)));  // 3 * 3 = 2 mod 7
  CHECK_FALSE(point_invariants_hold(a, fd, pt(3, 3, 1), &why));
  CHECK(why == "values are not multiplicative on the support relations");
  CHECK_FALSE(point_invariants_hold(a, fd, pt(3, 4, 2)));
  CHECK_FALSE(point_invariants_hold(a, fd, pt(0, 3, 3)));
}

TEST_CASE("point enumeration on pinned examples") {
  SECTION("counterexample over F_2 and F_4") {
    auto a2 = cx_algebra(2, 1);
    auto pts = enumerate_points(a2);
    REQUIRE(pts.size() == 1);
    const GF& k = a2.field;
    CHECK(pts[0].monoid_values == std::vector<GF::Elem>{k.zero(), k.one(), k.one()});

    auto a4 = cx_algebra(2, 2);
    auto pts4 = enumerate_points(a4);
    REQUIRE(pts4.size() == 3);  // t = 0, u any unit, u^{-1} forced
    for (const auto& z : pts4) {
      CHECK(z.monoid_values[0] == 0);
      CHECK(a4.field.mul(z.monoid_values[1], z.monoid_values[2]) == a4.field.one());
    }
  }
  SECTION("node over F_3") {
    auto a = node_algebra(3, 1);
    auto pts = enumerate_points(a);
    REQUIRE(pts.size() == 5);
    long on_x = 0, on_y = 0, origin = 0;
    for (const auto& z : pts) {
      bool x0 = z.monoid_values[0] == 0, y0 = z.monoid_values[1] == 0;
      REQUIRE((x0 || y0));
      if (x0 && y0) ++origin;
      else if (y0) ++on_x;
      else ++on_y;
    }
    CHECK(origin == 1);
    CHECK(on_x == 2);
    CHECK(on_y == 2);
  }
  SECTION("trivial log structure with one smooth variable") {
    auto a = trivial_algebra(2, 1, 1);
    auto pts = enumerate_points(a);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].w_values == std::vector<GF::Elem>{0});
    CHECK(pts[1].w_values == std::vector<GF::Elem>{1});
  }
  SECTION("budget refusal") {
    auto a = trivial_algebra(2, 1, 30);
    CHECK_THROWS_AS(enumerate_points(a), resource_error);
  }
}

TEST_CASE("omega fiber dimensions on pinned examples") {
  auto zero_pt = [](const ChartAlgebra<GF>& a) {
    AlgebraPoint<GF> z;
    z.monoid_values.assign(a.chart.target.generator_count(), a.field.zero());
    z.w_values.assign(a.smooth_vars, a.field.zero());
    return z;
  };
  SECTION("counterexample: Z^2 / (p, 1) is free of rank one") {
    for (long p : {2L, 5L}) {
      auto a = cx_algebra(p, 1);
      auto om = omega_fiber(a, zero_pt(a));
      CHECK(om.dimension == 1);
      CHECK(om.cokernel.free_rank == 1);
      CHECK(om.cokernel.torsion.empty());
    }
  }
  SECTION("node: Z^2 / (1, 1)") {
    auto a = node_algebra(3, 1);
    CHECK(omega_fiber(a, zero_pt(a)).dimension == 1);
  }
  SECTION("trivial log structure is classical") {
    auto a = trivial_algebra(2, 1, 2);
    auto om = omega_fiber(a, zero_pt(a));
    CHECK(om.dimension == 2);
    CHECK(om.surviving.empty());
  }
  SECTION("torsion slots survive exactly in the bad characteristic") {
    AffineMonoid q = mono(1, {{1}});
    MonoidHom times_p = make_hom(q, mono(1, {{1}}), {{Int(5)}});
    auto bad = make_chart_algebra(GF(5, 1), times_p, 0, false);
    CHECK(omega_fiber(bad, zero_pt(bad)).dimension == 1);
    auto good = make_chart_algebra(GF(3, 1), times_p, 0, false);
    CHECK(omega_fiber(good, zero_pt(good)).dimension == 0);
  }
}

TEST_CASE("differentials on the counterexample vanish identically") {
  for (auto [p, m] : {std::pair<long, long>{2, 1}, {2, 2}, {5, 1}}) {
    auto a = cx_algebra(p, m);
    auto pts = enumerate_points(a);
    REQUIRE_FALSE(pts.empty());
    auto om = omega_fiber(a, pts[0]);
    const GF& k = a.field;
    PolyFunc<GF> f_t = {term(k, 1, {1, 0})};
    PolyFunc<GF> f_u = {term(k, 1, {0, 1})};
    PolyFunc<GF> f_ui = {term(k, 1, {0, -1})};
    for (const auto& z : pts) {
      for (const auto& f : {f_t, f_u, f_ui}) {
        auto fib = differential_fiber(a, om, f, z);
        REQUIRE(fib.size() == 1);
        CHECK(k.is_zero(fib[0]));
      }
    }
  }
}

TEST_CASE("the counterexample section is nowhere log smooth") {
  for (long p : {2L, 3L}) {
    auto a = cx_algebra(p, 1);
    auto pts = enumerate_points(a);
    auto om = omega_fiber(a, pts[0]);
    const GF& k = a.field;
    std::vector<PolyFunc<GF>> funcs = {{term(k, 1, {1, 0})},
                                       {term(k, 1, {0, 1})},
                                       {term(k, 1, {0, -1})}};
    long on_section = 0;
    for (const auto& z : pts) {
      std::vector<GF::Elem> u(4);
      for (long code = 0; code < k.order() * k.order() * k.order() * k.order(); ++code) {
        long c = code;
        for (int i = 0; i < 4; ++i) {
          u[i] = static_cast<GF::Elem>(c % k.order());
          c /= k.order();
        }
        GF::Elem val = u[0];
        for (size_t i = 0; i < funcs.size(); ++i)
          val = k.add(val, k.mul(u[i + 1], evaluate(a, funcs[i], z)));
        if (!k.is_zero(val)) continue;  // z is not on this section
        CHECK_FALSE(log_smooth_section_at_point(a, om, funcs, u, z));
        ++on_section;
      }
    }
    CHECK(on_section > 0);
  }
}

TEST_CASE("node sections behave as the criterion predicts") {
  auto a = node_algebra(3, 1);
  auto om = omega_fiber(a, AlgebraPoint<GF>{{0, 0}, {}});
  const GF& k = a.field;
  std::vector<PolyFunc<GF>> funcs = {{term(k, 1, {1, 0})}, {term(k, 1, {0, 1})}};

  SECTION("smooth at (a, 0) when the x-coefficient is a unit") {
    for (long aval : {1L, 2L}) {
      for (long u1 : {1L, 2L}) {
        for (long u2 : {0L, 1L, 2L}) {
          AlgebraPoint<GF> z{{k.from_int(aval), k.zero()}, {}};
          std::vector<GF::Elem> u = {k.neg(k.mul(k.from_int(u1), k.from_int(aval))),
                                     k.from_int(u1), k.from_int(u2)};
          CHECK(log_smooth_section_at_point(a, om, funcs, u, z));
        }
      }
    }
  }
  SECTION("never smooth at the origin") {
    AlgebraPoint<GF> z{{k.zero(), k.zero()}, {}};
    for (long u1 = 0; u1 < 3; ++u1)
      for (long u2 = 0; u2 < 3; ++u2) {
        std::vector<GF::Elem> u = {k.zero(), k.from_int(u1), k.from_int(u2)};
        CHECK_FALSE(log_smooth_section_at_point(a, om, funcs, u, z));
      }
  }
  SECTION("off-section points are rejected") {
    AlgebraPoint<GF> z{{k.one(), k.zero()}, {}};
    std::vector<GF::Elem> u = {k.one(), k.one(), k.zero()};  // 1 + x is 2 at x = 1
    CHECK_THROWS_AS(log_smooth_section_at_point(a, om, funcs, u, z), config_error);
  }
}

TEST_CASE("fiber dimension is constant across the enumeration") {
  auto a = node_algebra(5, 1, 1);
  auto pts = enumerate_points(a);
  REQUIRE_FALSE(pts.empty());
  auto om = omega_fiber(a, pts[0]);
  const GF& k = a.field;
  PolyFunc<GF> f = {term(k, 1, {1, 0}, {2}), term(k, 2, {0, 1}, {0})};
  for (const auto& z : pts) {
    CHECK(omega_fiber(a, z).dimension == om.dimension);
    CHECK(differential_fiber(a, om, f, z).size() == static_cast<size_t>(om.dimension));
  }
}

TEST_CASE("differentials are additive and satisfy the Leibniz rule") {
  std::mt19937_64 rng(8852001);
  auto a = node_algebra(5, 1, 2);
  auto pts = enumerate_points(a);
  auto om = omega_fiber(a, pts[0]);
  const GF& k = a.field;

  auto random_poly = [&](long nterms) {
    PolyFunc<GF> f;
    for (long t = 0; t < nterms; ++t) {
      std::vector<Int> pe = {Int(rng() % 3), Int(rng() % 3)};
      std::vector<long> we = {static_cast<long>(rng() % 3), static_cast<long>(rng() % 3)};
      f.push_back(term(k, static_cast<long>(rng() % 5), std::move(pe), std::move(we)));
    }
    return f;
  };
  auto product = [&](const PolyFunc<GF>& f, const PolyFunc<GF>& g) {
    PolyFunc<GF> h;
    for (const auto& s : f)
      for (const auto& t : g) {
        MonomialTerm<GF> u;
        u.coeff = k.mul(s.coeff, t.coeff);
        for (size_t j = 0; j < s.p_exponent.size(); ++j)
          u.p_exponent.push_back(s.p_exponent[j] + t.p_exponent[j]);
        for (size_t j = 0; j < s.w_exponent.size(); ++j)
          u.w_exponent.push_back(s.w_exponent[j] + t.w_exponent[j]);
        h.push_back(std::move(u));
      }
    return h;
  };

  for (long trial = 0; trial < 30; ++trial) {
    PolyFunc<GF> f = random_poly(1 + rng() % 3), g = random_poly(1 + rng() % 3);
    const auto& z = pts[rng() % pts.size()];
    auto ff = differential_fiber(a, om, f, z);
    auto fg = differential_fiber(a, om, g, z);

    PolyFunc<GF> sum = f;
    sum.insert(sum.end(), g.begin(), g.end());
    auto fsum = differential_fiber(a, om, sum, z);
    for (size_t i = 0; i < fsum.size(); ++i) CHECK(fsum[i] == k.add(ff[i], fg[i]));

    auto fprod = differential_fiber(a, om, product(f, g), z);
    GF::Elem fz = evaluate(a, f, z), gz = evaluate(a, g, z);
    for (size_t i = 0; i < fprod.size(); ++i)
      CHECK(fprod[i] == k.add(k.mul(fz, fg[i]), k.mul(gz, ff[i])));
  }
}

TEST_CASE("omega section for log point extensions") {
  SECTION("function field target with trivial unit parts") {
    RatFuncField l(GF(2, 1));
    MonoidHom qp = make_hom(mono(1, {{1}}), mono(1, {{1}}), {{Int(2)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    CHECK(rep.omega1_dim == 1);
    CHECK(rep.dlog_classes == 1);
    CHECK(rep.extension_valid);
    CHECK(rep.composite_identity);
    // s(du) = du on the Omega^1 block, s(dlog tbar) = 0
    CHECK(l.eq(rep.section_values[0][0], l.one()));
    CHECK(l.is_zero(rep.section_values[1][0]));
  }
  SECTION("perfect target is trivially fine") {
    GF l(3, 2);
    MonoidHom qp = make_hom(mono(1, {{1}}), mono(1, {{1}}), {{Int(3)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    CHECK(rep.omega1_dim == 0);
    CHECK(rep.extension_valid);
    CHECK(rep.composite_identity);
  }
  SECTION("two dlog classes both map to zero") {
    RatFuncField l(GF(3, 1));
    MonoidHom qp = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}}), {{Int(1), Int(1)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    CHECK(rep.dlog_classes == 2);
    CHECK(l.is_zero(rep.section_values[1][0]));
    CHECK(l.is_zero(rep.section_values[2][0]));
    CHECK(rep.extension_valid);
  }
  SECTION("transcendental unit part breaks the section") {
    RatFuncField l(GF(2, 1));
    MonoidHom qp = make_hom(mono(1, {{1}}), mono(1, {{1}}), {{Int(2)}});
    auto rep = omega_section_logpoint(qp, {l.transcendental()}, l);
    CHECK_FALSE(rep.extension_valid);
    CHECK_FALSE(rep.composite_identity);
    REQUIRE(rep.relation_images.size() == 1);
    CHECK_FALSE(l.is_zero(rep.relation_images[0][0]));
  }
  SECTION("constant unit parts stay valid") {
    RatFuncField l(GF(5, 1));
    MonoidHom qp = make_hom(mono(1, {{1}}), mono(1, {{1}}), {{Int(2)}});
    CHECK(omega_section_logpoint(qp, {l.from_int(3)}, l).extension_valid);
    CHECK_THROWS_AS(omega_section_logpoint(qp, {l.zero()}, l), config_error);
  }
}
