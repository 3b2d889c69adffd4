#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "logbertini/json_io.hpp"
#include "logbertini/models.hpp"
#include "logbertini/util.hpp"

namespace logbertini::cli {

// Experiment driver. Every subcommand consumes one JSON input document and
// produces one JSON report; the report is a pure function of (config, seed,
// version), so reruns are byte-identical. The worker count is execution
// plumbing and deliberately left out of the report.
//
// Exit codes: 0 all checks passed, 1 a verification failed, 2 inconclusive
// (including exhausted budgets, which keep a partial report), 3 bad config.

using jsonio::J;

constexpr const char* kSchema = "logbertini/1";
constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
  std::string command;
  J input = J::object();
  std::uint64_t seed = 0;
  long workers = 1;
  long trials = -1;         // -1: take the input document's value
  long max_extension = -1;  // likewise
  long point_budget = -1;   // likewise
  std::string out_path;
};

struct CommandResult {
  int exit_code = 3;
  J report;
};

namespace detail {

inline const J& need(const J& in, const std::string& key) {
  if (!in.is_object() || !in.contains(key))
    throw config_error("config: missing field '" + key + "'");
  return in.at(key);
}

inline long to_long(const J& v, const std::string& what) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      size_t used = 0;
      long out = std::stol(s, &used);
      if (used == s.size()) return out;
    } catch (const std::exception&) {
    }
  }
  throw config_error("config: '" + what + "' must be an integer");
}

inline long get_long(const J& in, const std::string& key) {
  return to_long(need(in, key), key);
}

inline long get_long_or(const J& in, const std::string& key, long fallback) {
  return in.is_object() && in.contains(key) ? to_long(in.at(key), key) : fallback;
}

inline bool get_bool_or(const J& in, const std::string& key, bool fallback) {
  if (!in.is_object() || !in.contains(key)) return fallback;
  if (!in.at(key).is_boolean())
    throw config_error("config: '" + key + "' must be a boolean");
  return in.at(key).get<bool>();
}

inline std::string get_str(const J& in, const std::string& key) {
  const J& v = need(in, key);
  if (!v.is_string()) throw config_error("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

inline Int to_int(const J& v, const std::string& what) {
  if (v.is_number_integer()) return Int(v.get<long>());
  if (v.is_string()) {
    try {
      return Int(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw config_error("config: '" + what + "' must be an integer");
}

inline Rat to_rat(const J& v, const std::string& what) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) {
    try {
      return Rat(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw config_error("config: '" + what + "' must be an integer or 'a/b' string");
}

inline std::vector<Int> int_vec(const J& v, const std::string& what) {
  if (!v.is_array()) throw config_error("config: '" + what + "' must be an array");
  std::vector<Int> out;
  for (const auto& e : v) out.push_back(to_int(e, what));
  return out;
}

inline std::vector<long> long_vec(const J& v, const std::string& what) {
  if (!v.is_array()) throw config_error("config: '" + what + "' must be an array");
  std::vector<long> out;
  for (const auto& e : v) out.push_back(to_long(e, what));
  return out;
}

inline std::vector<std::vector<Int>> int_rows(const J& v, const std::string& what) {
  if (!v.is_array()) throw config_error("config: '" + what + "' must be an array");
  std::vector<std::vector<Int>> out;
  for (const auto& e : v) out.push_back(int_vec(e, what));
  return out;
}

inline AffineMonoid monoid_of(const J& v, const std::string& what) {
  AffineMonoid m{get_long(v, "ambient_rank"), int_rows(need(v, "generators"), what)};
  for (const auto& g : m.generators)
    if (static_cast<long>(g.size()) != m.ambient_rank)
      throw config_error("config: '" + what + "' generator width differs from ambient_rank");
  return m;
}

inline MonoidHom hom_of(const J& in) {
  return make_hom(monoid_of(need(in, "source"), "source"),
                  monoid_of(need(in, "target"), "target"),
                  int_rows(need(in, "images"), "images"));
}

// field spec {kind: gf|rational|ratfunc, p, m} shared by the chart command
inline GF gf_of(const J& v) {
  return GF(get_long(v, "p"), get_long_or(v, "m", 1));
}

inline long resolve(long flag_value, const J& in, const char* key, long fallback) {
  if (flag_value >= 0) return flag_value;
  return get_long_or(in, key, fallback);
}

inline long sum_points(const HyperplaneReport& rep) {
  long total = 0;
  for (long c : rep.points_by_degree) total += c;
  return total;
}

// true when every recorded failure fiber is identically zero over its field
inline bool fibers_all_zero(const GF& base, const BertiniRun& run) {
  for (const auto& rep : run.reports)
    for (const auto& f : rep.failures) {
      GF ext(static_cast<long>(base.characteristic()), base.degree() * f.degree);
      for (const auto& row : f.fibers)
        for (const auto& e : row)
          if (!ext.is_zero(e)) return false;
    }
  return true;
}

}  // namespace detail

// --------------------------------------------------------------------------
// subcommands
// --------------------------------------------------------------------------

inline std::pair<int, J> cmd_monoid_analyze(const ExperimentConfig& cfg, const J& in) {
  AffineMonoid m = detail::monoid_of(detail::need(in, "monoid"), "monoid");
  long budget = detail::resolve(cfg.point_budget, in, "saturation_budget", 10000000);
  J r;
  r["monoid"] = jsonio::monoid_json(m);
  r["is_sharp"] = is_sharp(m);
  bool saturated = is_saturated(m, budget);
  r["is_saturated"] = saturated;
  AffineMonoid sat = saturate(m, budget);
  r["saturation"] = jsonio::monoid_json(sat);
  bool self_check = is_saturated(sat, budget) && (!saturated || monoid_set_equal(m, sat));
  J face_list = J::array();
  for (const auto& f : faces(m)) face_list.push_back(jsonio::long_list(f.member_indices));
  r["faces"] = std::move(face_list);
  Face uf = units_face(m);
  r["units_face_members"] = jsonio::long_list(uf.member_indices);
  SharpQuotient sq = sharp_quotient_at_face(m, uf);
  J sqj;
  sqj["quotient"] = jsonio::monoid_json(sq.quotient);
  sqj["gp_basis"] = jsonio::intmat_json(sq.gp_basis);
  r["sharp_quotient_at_units"] = std::move(sqj);
  bool quotient_sharp = is_sharp(sq.quotient);
  r["quotient_is_sharp"] = quotient_sharp;
  self_check = self_check && quotient_sharp;
  r["self_check"] = self_check;
  return {self_check ? 0 : 1, r};
}

inline std::pair<int, J> cmd_chart_construct(const ExperimentConfig&, const J& in) {
  const J& fin = detail::need(in, "field");
  std::string kind = detail::get_str(fin, "kind");
  AffineMonoid pbar = detail::monoid_of(detail::need(in, "pbar"), "pbar");
  std::vector<Int> exps = detail::int_vec(detail::need(in, "exponents"), "exponents");
  J r;
  bool success = false;
  if (kind == "gf") {
    GF k = detail::gf_of(fin);
    auto c = construct_chart_satz1(pbar, exps, k.from_int(detail::to_int(
                                                  detail::need(in, "unit"), "unit")),
                                   k);
    success = c.success;
    r = jsonio::chart_satz1_json(k, c);
  } else if (kind == "rational") {
    QField k;
    auto c = construct_chart_satz1(
        pbar, exps, detail::to_rat(detail::need(in, "unit"), "unit"), k);
    success = c.success;
    r = jsonio::chart_satz1_json(k, c);
  } else if (kind == "ratfunc") {
    RatFuncField k(GF(detail::get_long(fin, "p"), detail::get_long_or(fin, "m", 1)));
    const J& uin = detail::need(in, "unit");
    auto poly_of = [&](const char* what) {
      Poly<GF> p;
      for (long c : detail::long_vec(detail::need(uin, what), what))
        p.c.push_back(k.base().from_int(Int(c)));
      return poly_trim(k.base(), std::move(p));
    };
    auto u = k.from_fraction(poly_of("num"), poly_of("den"));
    auto c = construct_chart_satz1(pbar, exps, u, k);
    success = c.success;
    r = jsonio::chart_satz1_json(k, c);
  } else {
    throw config_error("config: field kind must be gf, rational, or ratfunc");
  }
  return {success ? 0 : 1, r};
}

inline std::pair<int, J> cmd_kato_check(const ExperimentConfig&, const J& in) {
  MonoidHom h = detail::hom_of(detail::need(in, "hom"));
  Int residue_char = detail::to_int(detail::need(in, "residue_char"), "residue_char");
  Face f = in.contains("face_indices")
               ? make_face(h.target, detail::long_vec(in.at("face_indices"),
                                                      "face_indices"))
               : units_face(h.target);
  KatoResult res = kato_condition(h, residue_char);
  J r = jsonio::kato_json(res);
  r["face_members"] = jsonio::long_list(f.member_indices);
  r["tame_torsion_primes"] = jsonio::num_list(tame_torsion_primes(h, f));
  return {res.smooth_ok ? 0 : 1, r};
}

namespace detail {

// shared spec builder for bertini-run; the algebra block carries the chart
// hom and the functions are lists of monomial terms
inline SectionSpec section_spec_of(const GF& k, const J& in) {
  const J& ain = need(in, "algebra");
  MonoidHom h = hom_of(ain);
  ChartAlgebra<GF> algebra =
      make_chart_algebra(k, std::move(h), get_long_or(ain, "smooth_vars", 0),
                         get_bool_or(ain, "declared_log_smooth", true));
  std::vector<PolyFunc<GF>> f_list;
  const J& fl = need(in, "f_list");
  if (!fl.is_array()) throw config_error("config: 'f_list' must be an array");
  for (const auto& fv : fl) {
    PolyFunc<GF> f;
    if (!fv.is_array()) throw config_error("config: each function is a term array");
    for (const auto& tv : fv) {
      MonomialTerm<GF> t{k.from_int(to_int(need(tv, "coeff"), "coeff")),
                         int_vec(need(tv, "p_exponent"), "p_exponent"),
                         tv.contains("w_exponent")
                             ? long_vec(tv.at("w_exponent"), "w_exponent")
                             : std::vector<long>{}};
      f.push_back(std::move(t));
    }
    f_list.push_back(std::move(f));
  }
  long r = get_long_or(in, "r", 1);
  std::vector<std::vector<GF::Elem>> coeffs;
  if (in.contains("coefficients"))
    for (const auto& row : in.at("coefficients")) {
      std::vector<GF::Elem> out;
      for (const auto& e : row) out.push_back(k.from_int(to_int(e, "coefficients")));
      coeffs.push_back(std::move(out));
    }
  return make_section_spec(std::move(algebra), std::move(f_list), r, std::move(coeffs));
}

}  // namespace detail

inline std::pair<int, J> cmd_bertini_run(const ExperimentConfig& cfg, const J& in) {
  const J& fin = detail::need(in, "field");
  GF k = detail::gf_of(fin);
  SectionSpec spec = detail::section_spec_of(k, in);
  BertiniOptions opt;
  std::string mode = detail::get_str(in, "mode");
  if (mode == "exhaustive") opt.mode = BertiniOptions::Mode::exhaustive;
  else if (mode == "sample") opt.mode = BertiniOptions::Mode::sample;
  else if (mode == "symbolic") opt.mode = BertiniOptions::Mode::symbolic;
  else throw config_error("config: mode must be exhaustive, sample, or symbolic");
  opt.trials = detail::resolve(cfg.trials, in, "trials", -1);
  if (opt.mode == BertiniOptions::Mode::sample && opt.trials <= 0)
    throw config_error("config: empty trial count");
  opt.max_extension = detail::resolve(cfg.max_extension, in, "max_extension", 3);
  opt.seed = cfg.seed;
  opt.sharpness_waiver = detail::get_bool_or(in, "sharpness_waiver", false);
  opt.point_budget = detail::resolve(cfg.point_budget, in, "point_budget", 10000000);
  opt.hyperplane_budget = detail::get_long_or(in, "hyperplane_budget", 1000000);
  opt.workers = cfg.workers;
  BertiniRun run = verify_log_bertini(spec, opt);
  J r = jsonio::bertini_run_json(k, run);
  if (run.smooth_count > 0) return {0, r};
  if (run.failing_count > 0) return {1, r};
  return {2, r};
}

inline std::pair<int, J> cmd_cx_reproduce(const ExperimentConfig& cfg, const J& in) {
  long p = detail::get_long_or(in, "p", 2);
  long m_cap = detail::resolve(cfg.max_extension, in, "max_extension", 3);
  if (m_cap < 1) throw config_error("config: max_extension must be positive");
  long hyperplane_budget = detail::get_long_or(in, "hyperplane_budget", 1000000);
  J r;
  r["p"] = jsonio::num(p);
  r["max_extension"] = jsonio::num(m_cap);

  // one symbolic run over the prime field covers every extension degree up
  // to the cap: a point falls exactly when all its df fibers vanish, which
  // makes the fiber of any hyperplane through it zero
  auto a = models::cx_algebra(p, 1);
  auto spec = make_section_spec(a, models::cx_functions(a.field), 1, {});
  BertiniOptions opt;
  opt.mode = BertiniOptions::Mode::symbolic;
  opt.max_extension = m_cap;
  opt.workers = cfg.workers;
  BertiniRun sym = verify_log_bertini(spec, opt);
  const HyperplaneReport& rep = sym.reports.at(0);
  long total = detail::sum_points(rep);
  bool sym_ok = total > 0 && static_cast<long>(rep.failures.size()) == total &&
                detail::fibers_all_zero(a.field, sym);
  J sj;
  sj["points"] = jsonio::num(total);
  sj["all_points_fail"] = static_cast<long>(rep.failures.size()) == total;
  sj["all_fibers_zero"] = detail::fibers_all_zero(a.field, sym);
  sj["run"] = jsonio::bertini_run_json(a.field, sym);
  r["symbolic"] = std::move(sj);

  // ground the universal claim literally wherever the tuple space fits the
  // budget: every hyperplane tuple over F_{p^m}, every on-section point
  bool exh_ok = true;
  J sweeps = J::array();
  for (long m = 1; m <= m_cap; ++m) {
    J sw;
    sw["m"] = jsonio::num(m);
    Int q = 1;
    for (long i = 0; i < m; ++i) q *= p;
    Int space = q * q * q * q;  // four coefficients per hyperplane tuple
    bool runnable = space <= hyperplane_budget;
    sw["hyperplane_space"] = jsonio::num(space);
    sw["ran"] = runnable;
    if (runnable) {
      auto am = models::cx_algebra(p, m);
      auto specm = make_section_spec(am, models::cx_functions(am.field), 1, {});
      BertiniOptions om;
      om.mode = BertiniOptions::Mode::exhaustive;
      om.max_extension = 1;
      om.hyperplane_budget = hyperplane_budget;
      om.workers = cfg.workers;
      BertiniRun run = verify_log_bertini(specm, om);
      bool ok = run.smooth_count == 0 && detail::fibers_all_zero(am.field, run);
      long on_section = 0;
      for (const auto& hr : run.reports) {
        long pts = detail::sum_points(hr);
        on_section += pts;
        if (static_cast<long>(hr.failures.size()) != pts) ok = false;
      }
      sw["hyperplanes"] = jsonio::num(static_cast<long>(run.reports.size()));
      sw["on_section_points"] = jsonio::num(on_section);
      sw["confirmed"] = ok;
      exh_ok = exh_ok && ok;
    }
    sweeps.push_back(std::move(sw));
  }
  r["exhaustive"] = std::move(sweeps);

  bool confirmed = sym_ok && exh_ok;
  r["conclusion"] = confirmed ? "nowhere log smooth: confirmed"
                              : "nowhere log smooth: refuted";
  return {confirmed ? 0 : 1, r};
}

inline std::pair<int, J> cmd_dvr_blowup_verify(const ExperimentConfig&, const J& in) {
  long n = detail::get_long_or(in, "n", 2);
  BlowupReport rep = blowup_chart_verify(n);
  return {rep.all_ok ? 0 : 1, jsonio::blowup_json(rep)};
}

inline std::pair<int, J> cmd_dvr_gamma_basis(const ExperimentConfig&, const J& in) {
  long n = detail::get_long_or(in, "n", 2);
  long d = detail::get_long_or(in, "d", 2);
  GammaIdealBasis g = gamma_ideal_basis(n, d);
  bool ok = g.quotient_is_v_mod_pi && g.kernel_is_pi_marked_class &&
            g.reduction_lands_in_pointed &&
            g.reduced_rank == static_cast<long>(g.elements.size()) - 1 &&
            g.reduction_kernel_dim == 1 &&
            g.pointed_kernel_dim == g.reduced_rank;
  J r = jsonio::gamma_json(g);
  r["sequence_checks_pass"] = ok;
  return {ok ? 0 : 1, r};
}

inline std::pair<int, J> cmd_dvr_bertini_instance(const ExperimentConfig& cfg,
                                                  const J& in) {
  std::string family = detail::get_str(in, "family");
  DVRInstance inst;
  if (family == "semistable") inst = make_instance(DVRFamily::semistable);
  else if (family == "smooth") inst = make_instance(DVRFamily::smooth);
  else if (family == "diagonal") {
    std::vector<Int> c = detail::int_vec(detail::need(in, "coeffs"), "coeffs");
    if (c.size() != 3) throw config_error("config: diagonal wants three coefficients");
    inst = make_diagonal_instance(Rat(c[0]), Rat(c[1]), Rat(c[2]));
  } else {
    throw config_error("config: family must be semistable, smooth, or diagonal");
  }
  long trials = detail::resolve(cfg.trials, in, "trials", -1);
  if (trials <= 0) throw config_error("config: empty trial count");
  Rat max_rate = detail::to_rat(
      in.contains("max_inconclusive_rate") ? in.at("max_inconclusive_rate") : J("1/5"),
      "max_inconclusive_rate");

  struct Row {
    std::vector<DVRScalar> coeffs;
    GoodLocusReport locus;
    EtaleVerdict verdict;  // meaningful only when the locus test passes
    std::uint64_t stream = 0;
  };
  auto rows = parallel_map(trials, cfg.workers, [&](long t) {
    Row row;
    row.stream = split_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(row.stream);
    row.coeffs = sample_hyperplane_through_P(inst, rng);
    row.locus = good_locus_check(inst, row.coeffs);
    // the saturated representative cuts the same subscheme over K and its
    // reduction is the specialization the locus test looked at
    if (row.locus.member)
      row.verdict = etale_check_curve_intersection(inst, {row.locus.saturated}).at(0);
    return row;
  });

  long in_good = 0, conclusive = 0, inconclusive = 0;
  bool all_good = true;
  J forms = J::array();
  for (const auto& row : rows) {
    J fj;
    fj["stream_seed"] = jsonio::num(row.stream);
    fj["coefficients"] = jsonio::dvr_scalar_list(row.coeffs);
    J lj;
    lj["in_hp"] = row.locus.in_hp;
    lj["regular_at_p"] = row.locus.regular_at_p;
    lj["reduction_finite"] = row.locus.reduction_finite;
    lj["member"] = row.locus.member;
    lj["specialization"] = jsonio::num_list(row.locus.spe);
    fj["good_locus"] = std::move(lj);
    if (row.locus.member) {
      ++in_good;
      fj["verdict"] = jsonio::etale_json(row.verdict);
      if (row.verdict.conclusive) {
        ++conclusive;
        if (!(row.verdict.etale_over_K && row.verdict.nonempty &&
              row.verdict.special_fibre_finite))
          all_good = false;
      } else {
        ++inconclusive;
      }
    } else {
      fj["verdict"] = nullptr;
    }
    forms.push_back(std::move(fj));
  }
  J r;
  r["family"] = inst.name;
  r["n"] = jsonio::num(inst.n);
  r["trials"] = jsonio::num(trials);
  r["in_good_locus"] = jsonio::num(in_good);
  r["conclusive"] = jsonio::num(conclusive);
  r["inconclusive"] = jsonio::num(inconclusive);
  bool rate_ok = in_good > 0 && Rat(inconclusive, in_good) < max_rate;
  r["inconclusive_rate"] =
      in_good > 0 ? J(jsonio::num(Rat(inconclusive, in_good))) : J(nullptr);
  r["max_inconclusive_rate"] = jsonio::num(max_rate);
  r["all_conclusive_good"] = all_good;
  r["forms"] = std::move(forms);
  if (!all_good) return {1, r};
  if (!rate_ok) return {2, r};
  return {0, r};
}

inline std::pair<int, J> cmd_satz2_verify(const ExperimentConfig&, const J& in) {
  long p = detail::get_long_or(in, "p", 3);
  AffineMonoid nn{1, {{Int(1)}}};
  J cases = J::array();
  bool all_ok = true;

  // extension 1: L = F_p(u), target N, the generator mapping to p times it;
  // the section sends dlog of the base class to zero and fixes du
  {
    RatFuncField l(GF(p, 1));
    MonoidHom qp = make_hom(nn, nn, {{Int(p)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    bool pinned = rep.omega1_dim == 1 && l.eq(rep.section_values.at(0).at(0), l.one()) &&
                  l.is_zero(rep.section_values.at(1).at(0));
    bool ok = rep.extension_valid && rep.composite_identity && pinned;
    all_ok = all_ok && ok;
    J c;
    c["name"] = "rational functions, target N";
    c["ok"] = ok;
    c["report"] = jsonio::omega_section_json(l, rep);
    cases.push_back(std::move(c));
  }

  // extension 2: L = F_{p^2} perfect, so Omega^1 vanishes and the section
  // is the zero map with nothing to verify beyond well-definedness
  {
    GF l(p, 2);
    MonoidHom qp = make_hom(nn, nn, {{Int(p)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    bool ok = rep.extension_valid && rep.composite_identity && rep.omega1_dim == 0;
    all_ok = all_ok && ok;
    J c;
    c["name"] = "perfect target";
    c["ok"] = ok;
    c["report"] = jsonio::omega_section_json(l, rep);
    cases.push_back(std::move(c));
  }

  // extension 3: L = F_p(u), target N^2 via 1 -> (1,1); both dlog classes
  // must die under the section
  {
    RatFuncField l(GF(p, 1));
    MonoidHom qp =
        make_hom(nn, AffineMonoid{2, {{Int(1), Int(0)}, {Int(0), Int(1)}}},
                 {{Int(1), Int(1)}});
    auto rep = omega_section_logpoint(qp, {l.one()}, l);
    bool pinned = rep.dlog_classes == 2 && l.is_zero(rep.section_values.at(1).at(0)) &&
                  l.is_zero(rep.section_values.at(2).at(0));
    bool ok = rep.extension_valid && rep.composite_identity && pinned;
    all_ok = all_ok && ok;
    J c;
    c["name"] = "rational functions, target N^2";
    c["ok"] = ok;
    c["report"] = jsonio::omega_section_json(l, rep);
    cases.push_back(std::move(c));
  }

  J r;
  r["p"] = jsonio::num(p);
  r["cases"] = std::move(cases);
  r["all_ok"] = all_ok;
  return {all_ok ? 0 : 1, r};
}

// --------------------------------------------------------------------------
// dispatch
// --------------------------------------------------------------------------

inline CommandResult run_experiment(const ExperimentConfig& cfg) {
  J report;
  report["schema"] = kSchema;
  report["version"] = kVersion;
  report["command"] = cfg.command;
  report["seed"] = jsonio::num(cfg.seed);
  CommandResult out;
  try {
    std::pair<int, J> res;
    if (cfg.command == "monoid-analyze") res = cmd_monoid_analyze(cfg, cfg.input);
    else if (cfg.command == "chart-construct") res = cmd_chart_construct(cfg, cfg.input);
    else if (cfg.command == "kato-check") res = cmd_kato_check(cfg, cfg.input);
    else if (cfg.command == "bertini-run") res = cmd_bertini_run(cfg, cfg.input);
    else if (cfg.command == "cx-reproduce") res = cmd_cx_reproduce(cfg, cfg.input);
    else if (cfg.command == "dvr-blowup-verify")
      res = cmd_dvr_blowup_verify(cfg, cfg.input);
    else if (cfg.command == "dvr-gamma-basis") res = cmd_dvr_gamma_basis(cfg, cfg.input);
    else if (cfg.command == "dvr-bertini-instance")
      res = cmd_dvr_bertini_instance(cfg, cfg.input);
    else if (cfg.command == "satz2-verify") res = cmd_satz2_verify(cfg, cfg.input);
    else throw config_error("config: unknown command '" + cfg.command + "'");
    out.exit_code = res.first;
    report["status"] = res.first == 0 ? "pass"
                       : res.first == 1 ? "fail"
                                        : "inconclusive";
    report["result"] = std::move(res.second);
  } catch (const config_error& e) {
    out.exit_code = 3;
    report["status"] = "config-error";
    report["error"] = e.what();
  } catch (const unsupported_field_error& e) {
    out.exit_code = 3;
    report["status"] = "config-error";
    report["error"] = e.what();
  } catch (const resource_error& e) {
    out.exit_code = 2;
    report["status"] = "inconclusive";
    report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 3;
    report["status"] = "error";
    report["error"] = e.what();
  }
  out.report = std::move(report);
  return out;
}

// --------------------------------------------------------------------------
// config loading
// --------------------------------------------------------------------------

inline ExperimentConfig config_from_json(const J& doc) {
  if (!doc.is_object()) throw config_error("config: document must be an object");
  ExperimentConfig cfg;
  if (doc.contains("command")) cfg.command = detail::get_str(doc, "command");
  if (doc.contains("seed")) {
    const J& v = doc.at("seed");
    if (v.is_number_unsigned()) cfg.seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<long long>() >= 0)
      cfg.seed = static_cast<std::uint64_t>(v.get<long long>());
    else if (v.is_string()) {
      try {
        size_t used = 0;
        cfg.seed = std::stoull(v.get<std::string>(), &used);
        if (used != v.get<std::string>().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw config_error("config: 'seed' must be a nonnegative integer");
      }
    } else {
      throw config_error("config: 'seed' must be a nonnegative integer");
    }
  }
  cfg.workers = detail::get_long_or(doc, "workers", 1);
  if (cfg.workers < 1) throw config_error("config: 'workers' must be positive");
  cfg.trials = detail::get_long_or(doc, "trials", -1);
  cfg.max_extension = detail::get_long_or(doc, "max_extension", -1);
  cfg.point_budget = detail::get_long_or(doc, "point_budget", -1);
  if (doc.contains("out")) cfg.out_path = detail::get_str(doc, "out");
  if (doc.contains("input")) {
    if (!doc.at("input").is_object())
      throw config_error("config: 'input' must be an object");
    cfg.input = doc.at("input");
  } else if (doc.contains("input_path")) {
    std::ifstream f(detail::get_str(doc, "input_path"));
    if (!f) throw config_error("config: cannot open input_path");
    try {
      cfg.input = J::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw config_error(std::string("config: input_path parse failure: ") + e.what());
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("config: cannot open " + path);
  J doc;
  try {
    doc = J::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config: parse failure: ") + e.what());
  }
  return config_from_json(doc);
}

// --------------------------------------------------------------------------
// human-readable summary
// --------------------------------------------------------------------------

namespace detail {

inline std::string fetch(const J& j, const char* key) {
  if (!j.contains(key)) return "-";
  const J& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_null()) return "-";
  return v.dump();
}

inline void line(std::ostringstream& os, const std::string& key,
                 const std::string& value) {
  os << "  " << key;
  size_t pad = key.size() < 28 ? 28 - key.size() : 2;
  for (size_t i = 0; i < pad; ++i) os << ' ';
  os << value << '\n';
}

}  // namespace detail

// Renders the report as a fixed-width table. Everything printed is read
// back off the JSON document, so the table never carries extra state.
inline std::string report_summary(const J& report) {
  if (!report.is_object() || !report.contains("command"))
    throw config_error("summary: not a report document");
  std::ostringstream os;
  std::string cmd = detail::fetch(report, "command");
  os << "report " << detail::fetch(report, "schema") << " | command " << cmd
     << " | status " << detail::fetch(report, "status") << '\n';
  detail::line(os, "seed", detail::fetch(report, "seed"));
  if (report.contains("error")) {
    detail::line(os, "error", detail::fetch(report, "error"));
    return os.str();
  }
  if (!report.contains("result")) return os.str();
  const J& r = report.at("result");
  if (cmd == "monoid-analyze") {
    detail::line(os, "sharp", detail::fetch(r, "is_sharp"));
    detail::line(os, "saturated", detail::fetch(r, "is_saturated"));
    detail::line(os, "faces", std::to_string(r.at("faces").size()));
    detail::line(os, "self check", detail::fetch(r, "self_check"));
  } else if (cmd == "chart-construct") {
    detail::line(os, "success", detail::fetch(r, "success"));
    detail::line(os, "n", detail::fetch(r, "n"));
    detail::line(os, "root", detail::fetch(r, "root"));
    if (!r.at("failure_reason").get<std::string>().empty())
      detail::line(os, "failure reason", detail::fetch(r, "failure_reason"));
  } else if (cmd == "kato-check") {
    detail::line(os, "smooth", detail::fetch(r, "smooth_ok"));
    detail::line(os, "etale", detail::fetch(r, "etale_ok"));
    detail::line(os, "kernel trivial", detail::fetch(r, "kernel_trivial"));
    detail::line(os, "tame torsion primes", r.at("tame_torsion_primes").dump());
  } else if (cmd == "bertini-run") {
    detail::line(os, "hyperplanes", std::to_string(r.at("reports").size()));
    detail::line(os, "log smooth", detail::fetch(r, "smooth_count"));
    detail::line(os, "failing", detail::fetch(r, "failing_count"));
    detail::line(os, "empty", detail::fetch(r, "empty_count"));
  } else if (cmd == "cx-reproduce") {
    detail::line(os, "conclusion", detail::fetch(r, "conclusion"));
    detail::line(os, "points (symbolic)", detail::fetch(r.at("symbolic"), "points"));
    for (const auto& sw : r.at("exhaustive")) {
      std::string tag = "m = " + detail::fetch(sw, "m");
      if (sw.at("ran").get<bool>())
        detail::line(os, tag,
                     detail::fetch(sw, "hyperplanes") + " hyperplanes, " +
                         detail::fetch(sw, "on_section_points") +
                         " on-section points, confirmed " +
                         detail::fetch(sw, "confirmed"));
      else
        detail::line(os, tag,
                     "skipped, tuple space " + detail::fetch(sw, "hyperplane_space"));
    }
  } else if (cmd == "dvr-blowup-verify") {
    detail::line(os, "n", detail::fetch(r, "n"));
    detail::line(os, "all identities hold", detail::fetch(r, "all_ok"));
    for (const auto& c : r.at("charts"))
      detail::line(os, "chart " + detail::fetch(c, "chart"),
                   detail::fetch(c, "identities_checked") + " identities, ok " +
                       (c.at("identities_hold").get<bool>() &&
                                c.at("surjective").get<bool>() &&
                                c.at("exchange_ok").get<bool>() &&
                                c.at("kernel_ok").get<bool>()
                            ? std::string("yes")
                            : std::string("no")));
  } else if (cmd == "dvr-gamma-basis") {
    detail::line(os, "n, d", detail::fetch(r, "n") + ", " + detail::fetch(r, "d"));
    detail::line(os, "cardinality", detail::fetch(r, "cardinality"));
    detail::line(os, "sequence checks", detail::fetch(r, "sequence_checks_pass"));
  } else if (cmd == "dvr-bertini-instance") {
    detail::line(os, "family", detail::fetch(r, "family"));
    detail::line(os, "trials", detail::fetch(r, "trials"));
    detail::line(os, "in good locus", detail::fetch(r, "in_good_locus"));
    detail::line(os, "conclusive", detail::fetch(r, "conclusive"));
    detail::line(os, "inconclusive", detail::fetch(r, "inconclusive"));
    detail::line(os, "inconclusive rate", detail::fetch(r, "inconclusive_rate"));
    detail::line(os, "all conclusive good", detail::fetch(r, "all_conclusive_good"));
  } else if (cmd == "satz2-verify") {
    for (const auto& c : r.at("cases"))
      detail::line(os, detail::fetch(c, "name"), detail::fetch(c, "ok"));
    detail::line(os, "all ok", detail::fetch(r, "all_ok"));
  }
  return os.str();
}

}  // namespace logbertini::cli
