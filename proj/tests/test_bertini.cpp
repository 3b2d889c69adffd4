#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "logbertini/bertini.hpp"

using namespace logbertini;

namespace {

AffineMonoid mono(long ambient, std::vector<std::vector<Int>> gens) {
  return AffineMonoid{ambient, std::move(gens)};
}

ChartAlgebra<GF> cx_algebra(long p, long m) {
  MonoidHom h = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}, {0, -1}}),
                         {{Int(p), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), 0, true);
}

ChartAlgebra<GF> node_algebra(long p, long m, long smooth_vars = 0) {
  MonoidHom h = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}}), {{Int(1), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), smooth_vars, true);
}

ChartAlgebra<GF> trivial_algebra(long p, long m, long smooth_vars) {
  MonoidHom h = make_hom(mono(1, {{0}}), mono(0, {}), {{}});
  return make_chart_algebra(GF(p, m), std::move(h), smooth_vars, false);
}

template <class K>
MonomialTerm<K> term(const K& k, long c, std::vector<Int> pe, std::vector<long> we = {}) {
  return MonomialTerm<K>{k.from_int(Int(c)), std::move(pe), std::move(we)};
}

std::vector<PolyFunc<GF>> node_funcs(const GF& k) {
  return {{term(k, 1, {1, 0})}, {term(k, 1, {0, 1})}};
}

std::vector<PolyFunc<GF>> cx_funcs(const GF& k) {
  return {{term(k, 1, {1, 0})}, {term(k, 1, {0, 1})}, {term(k, 1, {0, -1})}};
}

}  // namespace

TEST_CASE("section points on pinned examples") {
  SECTION("node cut by 1 + x + y over F_3") {
    auto a = node_algebra(3, 1);
    const GF k = a.field;
    auto spec = make_section_spec(a, node_funcs(k), 1, {{k.one(), k.one(), k.one()}});
    auto pts = section_points(spec, 1);
    REQUIRE(pts.size() == 2);
    for (const auto& z : pts) {
      bool xaxis = z.monoid_values[0] == k.from_int(2) && z.monoid_values[1] == 0;
      bool yaxis = z.monoid_values[0] == 0 && z.monoid_values[1] == k.from_int(2);
      CHECK((xaxis || yaxis));
    }
  }
  SECTION("no hyperplanes means every point") {
    auto a = node_algebra(3, 1);
    auto spec = make_section_spec(a, node_funcs(a.field), 0, {});
    CHECK(section_points(spec, 1).size() == enumerate_points(a).size());
  }
  SECTION("the all-ones hyperplane misses the counterexample over F_2") {
    auto a = cx_algebra(2, 1);
    const GF k = a.field;
    auto spec =
        make_section_spec(a, cx_funcs(k), 1, {{k.one(), k.one(), k.one(), k.one()}});
    CHECK(section_points(spec, 1).empty());  // at (0,1): 1 + 0 + 1 + 1 = 1
  }
  SECTION("degree two points agree with a direct re-count") {
    auto a = node_algebra(3, 1);
    const GF k = a.field;
    auto spec = make_section_spec(a, node_funcs(k), 1, {{k.one(), k.one(), k.one()}});
    auto pts = section_points(spec, 2);

    // independent oracle over F_9: assignments with x*y = 0 and 1 + x + y = 0
    GF big(3, 2);
    long expected = 0;
    for (long xc = 0; xc < 9; ++xc)
      for (long yc = 0; yc < 9; ++yc) {
        GF::Elem x = static_cast<GF::Elem>(xc), y = static_cast<GF::Elem>(yc);
        if (!big.is_zero(big.mul(x, y))) continue;
        if (!big.is_zero(big.add(big.one(), big.add(x, y)))) continue;
        ++expected;
      }
    CHECK(static_cast<long>(pts.size()) == expected);
    CHECK(expected == 2);
  }
}

TEST_CASE("nondegeneracy check") {
  GF k(5, 1);
  CHECK(nondegeneracy_check(k, {}));
  CHECK(nondegeneracy_check(k, {{0, 1, 0, 0}, {0, 0, 1, 0}}));
  CHECK_FALSE(nondegeneracy_check(k, {{1, 2, 0, 3}, {2, 4, 0, 1}}));
  CHECK_FALSE(nondegeneracy_check(k, {{1, 2, 3, 4}, {2, 4, 1, 3}}));
  CHECK_THROWS_AS(nondegeneracy_check(k, {{1, 2}, {2, 4}, {0, 1}}), config_error);

  SECTION("agrees with the minor oracle on random rows") {
    std::mt19937_64 rng(5511771);
    for (long trial = 0; trial < 100; ++trial) {
      FMat<GF> rows(2, std::vector<GF::Elem>(4));
      for (auto& row : rows)
        for (auto& c : row) c = static_cast<GF::Elem>(rng() % 5);
      bool minor = false;
      for (long i = 0; i < 4 && !minor; ++i)
        for (long j = i + 1; j < 4 && !minor; ++j) {
          GF::Elem det = k.sub(k.mul(rows[0][i], rows[1][j]), k.mul(rows[0][j], rows[1][i]));
          if (!k.is_zero(det)) minor = true;
        }
      CHECK(nondegeneracy_check(k, rows) == minor);
    }
  }
}

TEST_CASE("sharpness certificates at enumerated points") {
  SECTION("the counterexample certifies at closed points: residue fields are perfect") {
    auto a = cx_algebra(2, 1);
    for (const auto& z : enumerate_points(a))
      CHECK(sharp_certificate_at_point(a, z) == SharpCertificate::certified);
  }
  SECTION("a tame exponent can be undecided at a small field") {
    // generator goes to (2, 1): at a point (0, a, 1/a) the twist needs a
    // square root of a, which F_5 has only for a = 1, 4
    MonoidHom h = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}, {0, -1}}),
                           {{Int(2), Int(1)}});
    auto a = make_chart_algebra(GF(5, 1), h, 0, true);
    long certified = 0, undecided = 0;
    for (const auto& z : enumerate_points(a)) {
      auto c = sharp_certificate_at_point(a, z);
      if (c == SharpCertificate::certified) ++certified;
      if (c == SharpCertificate::needs_extension) ++undecided;
    }
    CHECK(certified == 2);
    CHECK(undecided == 2);
  }
  SECTION("trivial base certifies vacuously") {
    auto a = trivial_algebra(3, 1, 1);
    for (const auto& z : enumerate_points(a))
      CHECK(sharp_certificate_at_point(a, z) == SharpCertificate::certified);
  }
}

TEST_CASE("exhaustive verification of the node agrees with a direct oracle") {
  auto a = node_algebra(5, 1);
  const GF k = a.field;
  auto spec = make_section_spec(a, node_funcs(k), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 1;
  auto run = verify_log_bertini(spec, opt);
  REQUIRE(run.reports.size() == 125);
  CHECK(run.smooth_count > 0);
  CHECK(run.smooth_count + run.failing_count + run.empty_count == 125);

  // direct re-derivation with naive fiber evaluation: in Z^2/(1,1) take the
  // class of dlog x as +1 and dlog y as -1, so the fiber of the section
  // differential is u1 x - u2 y
  for (long code = 0; code < 125; ++code) {
    GF::Elem u0 = static_cast<GF::Elem>(code % 5);
    GF::Elem u1 = static_cast<GF::Elem>((code / 5) % 5);
    GF::Elem u2 = static_cast<GF::Elem>(code / 25);
    long pts = 0, bad = 0;
    for (long xc = 0; xc < 5; ++xc)
      for (long yc = 0; yc < 5; ++yc) {
        GF::Elem x = static_cast<GF::Elem>(xc), y = static_cast<GF::Elem>(yc);
        if (!k.is_zero(k.mul(x, y))) continue;
        GF::Elem on = k.add(u0, k.add(k.mul(u1, x), k.mul(u2, y)));
        if (!k.is_zero(on)) continue;
        ++pts;
        if (k.is_zero(k.sub(k.mul(u1, x), k.mul(u2, y)))) ++bad;
      }
    const HyperplaneReport& rep = run.reports[code];
    REQUIRE(rep.coefficients == FMat<GF>{{u0, u1, u2}});
    CHECK(rep.points_by_degree[0] == pts);
    CHECK(static_cast<long>(rep.failures.size()) == bad);
    SectionVerdict expect = pts == 0 ? SectionVerdict::empty_section
                            : bad == 0 ? SectionVerdict::log_smooth_everywhere
                                       : SectionVerdict::fails_somewhere;
    CHECK(rep.verdict == expect);
    CHECK(rep.unramified_ok);
  }
}

TEST_CASE("the section count over fixed slopes matches the point count of X") {
  // fixing (u1, u2) and summing over u0 partitions the points of X by the
  // value of -(u1 x + u2 y), so each group of reports must account for all
  // of them
  auto a = node_algebra(5, 1);
  const GF k = a.field;
  long x_count = static_cast<long>(enumerate_points(a).size());
  auto spec = make_section_spec(a, node_funcs(k), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 1;
  auto run = verify_log_bertini(spec, opt);
  for (long slope = 0; slope < 25; ++slope) {
    long total = 0;
    for (long u0 = 0; u0 < 5; ++u0) total += run.reports[slope * 5 + u0].points_by_degree[0];
    CHECK(total == x_count);
  }
}

TEST_CASE("every hyperplane fails on the counterexample") {
  auto a = cx_algebra(2, 1);
  const GF k = a.field;
  auto spec = make_section_spec(a, cx_funcs(k), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 2;
  auto run = verify_log_bertini(spec, opt);
  REQUIRE(run.reports.size() == 16);
  CHECK(run.smooth_count == 0);
  for (const auto& rep : run.reports) {
    long total = 0;
    for (long c : rep.points_by_degree) total += c;
    CHECK(static_cast<long>(rep.failures.size()) == total);
    if (total == 0) CHECK(rep.verdict == SectionVerdict::empty_section);
    else CHECK(rep.verdict == SectionVerdict::fails_somewhere);
  }
}

TEST_CASE("symbolic mode") {
  SECTION("total failure on the counterexample") {
    auto a = cx_algebra(3, 1);
    const GF k = a.field;
    auto spec = make_section_spec(a, cx_funcs(k), 1, {});
    BertiniOptions opt;
    opt.mode = BertiniOptions::Mode::symbolic;
    opt.max_extension = 2;
    auto run = verify_log_bertini(spec, opt);
    REQUIRE(run.reports.size() == 1);
    const auto& rep = run.reports[0];
    long total = 0;
    for (long c : rep.points_by_degree) total += c;
    CHECK(total > 0);
    CHECK(static_cast<long>(rep.failures.size()) == total);
    CHECK(rep.verdict == SectionVerdict::fails_somewhere);
  }
  SECTION("the node fails symbolically only at the origin") {
    auto a = node_algebra(3, 1);
    auto spec = make_section_spec(a, node_funcs(a.field), 1, {});
    BertiniOptions opt;
    opt.mode = BertiniOptions::Mode::symbolic;
    opt.max_extension = 2;
    auto run = verify_log_bertini(spec, opt);
    const auto& rep = run.reports[0];
    REQUIRE(rep.failures.size() == 2);  // the origin, once per degree
    for (const auto& f : rep.failures) {
      CHECK(f.point.monoid_values[0] == 0);
      CHECK(f.point.monoid_values[1] == 0);
    }
    CHECK(rep.unramified_ok);
  }
  SECTION("a smooth-variable line is clean") {
    auto a = trivial_algebra(3, 1, 1);
    const GF k = a.field;
    auto spec = make_section_spec(a, {{term(k, 1, {}, {1})}}, 1, {});
    BertiniOptions opt;
    opt.mode = BertiniOptions::Mode::symbolic;
    opt.sharpness_waiver = true;  // not declared log smooth: classical chart
    auto run = verify_log_bertini(spec, opt);
    CHECK(run.reports[0].verdict == SectionVerdict::log_smooth_everywhere);
  }
  SECTION("a ramified projection is flagged") {
    auto a = node_algebra(3, 1);
    const GF k = a.field;
    auto spec = make_section_spec(a, {{term(k, 1, {1, 0})}}, 1, {});  // x alone
    BertiniOptions opt;
    opt.mode = BertiniOptions::Mode::symbolic;
    opt.max_extension = 1;
    auto run = verify_log_bertini(spec, opt);
    CHECK_FALSE(run.reports[0].unramified_ok);
  }
  SECTION("undecided sharpness is reported, not fatal") {
    MonoidHom h = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}, {0, -1}}),
                           {{Int(2), Int(1)}});
    auto a = make_chart_algebra(GF(5, 1), h, 0, true);
    const GF k = a.field;
    auto spec = make_section_spec(a, cx_funcs(k), 1, {});
    BertiniOptions opt;
    opt.mode = BertiniOptions::Mode::symbolic;
    opt.max_extension = 1;
    auto run = verify_log_bertini(spec, opt);
    CHECK(run.reports[0].undecided_sharpness == 2);
    CHECK(run.reports[0].verdict == SectionVerdict::log_smooth_everywhere);
  }
}

TEST_CASE("the harness refuses undeclared algebras without the waiver") {
  MonoidHom h = make_hom(mono(1, {{1}}), mono(2, {{1, 0}, {0, 1}}), {{Int(1), Int(1)}});
  auto a = make_chart_algebra(GF(3, 1), h, 0, false);  // not declared
  auto spec = make_section_spec(a, node_funcs(a.field), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 1;
  CHECK_THROWS_AS(verify_log_bertini(spec, opt), config_error);
  opt.sharpness_waiver = true;
  CHECK_NOTHROW(verify_log_bertini(spec, opt));
}

TEST_CASE("sampling is deterministic under a fixed seed") {
  auto a = node_algebra(5, 1);
  auto spec = make_section_spec(a, node_funcs(a.field), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::sample;
  opt.trials = 25;
  opt.max_extension = 1;
  opt.seed = 96001;
  auto run1 = verify_log_bertini(spec, opt);
  auto run2 = verify_log_bertini(spec, opt);
  REQUIRE(run1.reports.size() == 25);
  for (size_t i = 0; i < 25; ++i) {
    CHECK(run1.reports[i].coefficients == run2.reports[i].coefficients);
    CHECK(run1.reports[i].verdict == run2.reports[i].verdict);
  }
  opt.seed = 96002;
  auto run3 = verify_log_bertini(spec, opt);
  bool same = true;
  for (size_t i = 0; i < 25; ++i)
    if (run3.reports[i].coefficients != run1.reports[i].coefficients) same = false;
  CHECK_FALSE(same);
}

TEST_CASE("two hyperplanes cut the smooth 3-space correctly") {
  auto a = trivial_algebra(3, 1, 3);
  const GF k = a.field;
  std::vector<PolyFunc<GF>> fs = {{term(k, 1, {}, {1, 0, 0})},
                                  {term(k, 1, {}, {0, 1, 0})},
                                  {term(k, 1, {}, {0, 0, 1})}};
  auto spec = make_section_spec(a, fs, 2, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 1;
  opt.sharpness_waiver = true;  // classical chart, not declared log smooth
  opt.hyperplane_budget = 10000;
  auto run = verify_log_bertini(spec, opt);
  REQUIRE(run.reports.size() == 6561);

  auto find_report = [&](const FMat<GF>& rows) -> const HyperplaneReport& {
    for (const auto& rep : run.reports)
      if (rep.coefficients == rows) return rep;
    throw std::logic_error("report not found");
  };
  // independent coordinate planes: a line, every point smooth
  const auto& clean = find_report({{0, 1, 0, 0}, {0, 0, 1, 0}});
  CHECK(clean.points_by_degree[0] == 3);
  CHECK(clean.verdict == SectionVerdict::log_smooth_everywhere);
  // a proportional pair never reaches rank two
  const auto& degen = find_report({{0, 1, 0, 0}, {0, 2, 0, 0}});
  CHECK(degen.points_by_degree[0] == 9);
  CHECK(degen.verdict == SectionVerdict::fails_somewhere);
  CHECK(degen.failures.size() == 9);
}

TEST_CASE("abstract rank check") {
  GF k(5, 1);
  SECTION("no sections leaves the full rank") {
    CHECK(abstract_rank_check(k, {{1, 0}, {0, 1}}, {}) == 2);
  }
  SECTION("classical smooth curve section drops rank by one") {
    auto a = trivial_algebra(5, 1, 2);
    auto om = omega_fiber(a, AlgebraPoint<GF>{{}, {k.zero(), k.zero()}});
    AlgebraPoint<GF> z{{}, {k.from_int(4), k.from_int(2)}};  // on 1 + w1 = 0
    PolyFunc<GF> f1 = {term(k, 1, {}, {1, 0})};
    auto fib = differential_fiber(a, om, f1, z);
    CHECK(abstract_rank_check(k, {{1, 0}, {0, 1}}, {fib}) == 1);
  }
  SECTION("node with the full omega fiber and a good hyperplane") {
    auto a = node_algebra(5, 1);
    auto om = omega_fiber(a, AlgebraPoint<GF>{{k.zero(), k.zero()}, {}});
    AlgebraPoint<GF> z{{k.from_int(2), k.zero()}, {}};
    // section u = (3, 1, 0): 3 + 2 = 0 over F_5
    PolyFunc<GF> fx = {term(k, 1, {1, 0})};
    auto fib = differential_fiber(a, om, fx, z);  // the section differential is 1 * dx
    CHECK(abstract_rank_check(k, {{1}}, {fib}) == 0);
  }
  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(abstract_rank_check(k, {{1, 0}}, {{1, 0, 0}}), config_error);
  }
}

TEST_CASE("generic subspace position") {
  GF k(7, 1);
  SECTION("the zero subspace always injects") {
    auto rep = generic_subspace_injectivity(k, {}, 4, 1, 50, 42);
    CHECK(rep.failures == 0);
    CHECK(rep.trials == 50);
  }
  SECTION("a subspace meeting the form is caught") {
    FMat<GF> s = {{1, 1, 0, 0}};
    CHECK_FALSE(subspace_injects(k, s, {{1, 1, 0, 0}}));
    CHECK_FALSE(subspace_injects(k, s, {{2, 2, 0, 0}}));
    CHECK(subspace_injects(k, s, {{1, 0, 0, 0}}));
  }
  SECTION("dimension precondition") {
    FMat<GF> s = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    CHECK_THROWS_AS(generic_subspace_injectivity(k, s, 4, 1, 10, 7), config_error);
  }
  SECTION("failures agree with the exhaustive membership oracle") {
    std::mt19937_64 seeder(33000);
    FMat<GF> s = {{static_cast<GF::Elem>(seeder() % 7), static_cast<GF::Elem>(seeder() % 7),
                   static_cast<GF::Elem>(seeder() % 7), static_cast<GF::Elem>(seeder() % 7)},
                  {static_cast<GF::Elem>(seeder() % 7), static_cast<GF::Elem>(seeder() % 7),
                   static_cast<GF::Elem>(seeder() % 7), static_cast<GF::Elem>(seeder() % 7)}};
    REQUIRE(frank(k, s) == 2);

    std::uint64_t seed = 909111;
    auto rep = generic_subspace_injectivity(k, s, 4, 1, 500, seed);

    // replay the identical draw sequence and decide each trial by checking
    // every nonzero combination of the basis for membership in the span
    std::mt19937_64 rng(seed);
    long failures = 0, degenerate = 0;
    for (long t = 0; t < 500; ++t) {
      FMat<GF> forms(1, std::vector<GF::Elem>(4));
      for (auto& c : forms[0]) c = static_cast<GF::Elem>(rng() % 7);
      bool zero = true;
      for (auto& c : forms[0])
        if (!k.is_zero(c)) zero = false;
      if (zero) { ++degenerate; continue; }
      bool hit = false;
      for (long c1 = 0; c1 < 7 && !hit; ++c1)
        for (long c2 = 0; c2 < 7 && !hit; ++c2) {
          if (c1 == 0 && c2 == 0) continue;
          std::vector<GF::Elem> v(4);
          for (long j = 0; j < 4; ++j)
            v[j] = k.add(k.mul(k.from_int(c1), s[0][j]), k.mul(k.from_int(c2), s[1][j]));
          if (in_row_span(k, forms, v)) hit = true;
        }
      if (hit) ++failures;
    }
    CHECK(rep.failures == failures);
    CHECK(rep.degenerate_skipped == degenerate);
  }
}

TEST_CASE("the harness is worker-count invariant") {
  auto a = node_algebra(3, 1);
  const GF& k = a.field;
  auto spec = make_section_spec(a, node_funcs(k), 1, {});

  auto same_runs = [](const BertiniRun& x, const BertiniRun& y) {
    REQUIRE(x.reports.size() == y.reports.size());
    for (size_t i = 0; i < x.reports.size(); ++i) {
      CHECK(x.reports[i].coefficients == y.reports[i].coefficients);
      CHECK(x.reports[i].points_by_degree == y.reports[i].points_by_degree);
      CHECK(x.reports[i].verdict == y.reports[i].verdict);
      CHECK(x.reports[i].failures.size() == y.reports[i].failures.size());
      CHECK(x.reports[i].unramified_ok == y.reports[i].unramified_ok);
      CHECK(x.reports[i].undecided_sharpness == y.reports[i].undecided_sharpness);
    }
    CHECK(x.smooth_count == y.smooth_count);
    CHECK(x.failing_count == y.failing_count);
    CHECK(x.empty_count == y.empty_count);
  };

  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::exhaustive;
  opt.max_extension = 2;
  auto one = verify_log_bertini(spec, opt);
  opt.workers = 3;
  auto three = verify_log_bertini(spec, opt);
  REQUIRE(one.reports.size() == 27);
  same_runs(one, three);

  opt.mode = BertiniOptions::Mode::sample;
  opt.trials = 20;
  opt.seed = 515151;
  opt.workers = 1;
  auto s1 = verify_log_bertini(spec, opt);
  opt.workers = 4;
  auto s4 = verify_log_bertini(spec, opt);
  REQUIRE(s1.reports.size() == 20);
  same_runs(s1, s4);
}
