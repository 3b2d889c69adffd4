#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "logbertini/bertini.hpp"
#include "logbertini/chart.hpp"
#include "logbertini/dvr.hpp"
#include "logbertini/logalg.hpp"
#include "logbertini/monoid.hpp"

namespace logbertini::jsonio {

// Report serialization. Two rules keep reports reproducible byte for byte:
// keys are inserted in a fixed order (ordered_json preserves insertion
// order), and every numeric value is rendered as an exact decimal or
// rational string, so no floating point representation ever enters a
// report. Field elements use the field's own to_string.

using J = nlohmann::ordered_json;

inline J num(long v) { return std::to_string(v); }
inline J num(std::uint64_t v) { return std::to_string(v); }
inline J num(const Int& v) { return v.str(); }
inline J num(const Rat& v) { return rat_to_string(v); }

inline J num_list(const std::vector<Int>& v) {
  J a = J::array();
  for (const auto& x : v) a.push_back(num(x));
  return a;
}

inline J num_list(const std::vector<Rat>& v) {
  J a = J::array();
  for (const auto& x : v) a.push_back(num(x));
  return a;
}

inline J long_list(const std::vector<long>& v) {
  J a = J::array();
  for (long x : v) a.push_back(num(x));
  return a;
}

inline J string_list(const std::vector<std::string>& v) {
  J a = J::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

template <class K>
J elem_list(const K& k, const std::vector<typename K::Elem>& v) {
  J a = J::array();
  for (const auto& e : v) a.push_back(k.to_string(e));
  return a;
}

template <class K>
J elem_rows(const K& k, const std::vector<std::vector<typename K::Elem>>& rows) {
  J a = J::array();
  for (const auto& r : rows) a.push_back(elem_list(k, r));
  return a;
}

inline J intmat_json(const IntMat& m) {
  J rows = J::array();
  for (long i = 0; i < m.rows; ++i) rows.push_back(num_list(m.row(i)));
  J j;
  j["rows"] = num(m.rows);
  j["cols"] = num(m.cols);
  j["entries"] = std::move(rows);
  return j;
}

inline J monoid_json(const AffineMonoid& m) {
  J gens = J::array();
  for (const auto& g : m.generators) gens.push_back(num_list(g));
  J j;
  j["ambient_rank"] = num(m.ambient_rank);
  j["generators"] = std::move(gens);
  return j;
}

inline J cokernel_json(const CokernelInvariants& c) {
  J j;
  j["free_rank"] = num(c.free_rank);
  j["torsion"] = num_list(c.torsion);
  return j;
}

inline J kato_json(const KatoResult& r) {
  J j;
  j["smooth_ok"] = r.smooth_ok;
  j["etale_ok"] = r.etale_ok;
  j["kernel_trivial"] = r.kernel_trivial;
  j["cokernel"] = cokernel_json(r.cokernel);
  return j;
}

template <class K>
J chart_satz1_json(const K& k, const ChartSatz1<K>& c) {
  J j;
  j["success"] = c.success;
  j["n"] = num(c.n);
  j["bezout"] = num_list(c.bezout);
  j["root"] = c.success ? J(k.to_string(c.root)) : J(nullptr);
  j["image"] = num_list(c.image);
  j["image_certificate"] = num_list(c.image_certificate);
  j["failure_reason"] = c.failure_reason;
  return j;
}

template <class K>
J omega_section_json(const K& k, const OmegaSectionReport<K>& r) {
  J j;
  j["omega1_dim"] = num(r.omega1_dim);
  j["dlog_classes"] = num(r.dlog_classes);
  j["extension_valid"] = r.extension_valid;
  j["composite_identity"] = r.composite_identity;
  j["section_values"] = elem_rows(k, r.section_values);
  j["relation_images"] = elem_rows(k, r.relation_images);
  return j;
}

inline const char* verdict_name(SectionVerdict v) {
  switch (v) {
    case SectionVerdict::log_smooth_everywhere: return "log-smooth-everywhere";
    case SectionVerdict::fails_somewhere: return "fails-somewhere";
    case SectionVerdict::empty_section: return "empty-section";
  }
  return "unknown";
}

inline J field_json(const GF& k) {
  J j;
  j["p"] = num(k.characteristic());
  j["degree"] = num(k.degree());
  j["order"] = num(k.order());
  return j;
}

// Failing points live over the extension field of the recorded degree; the
// same deterministic construction reproduces the field used by the harness.
inline J hyperplane_json(const GF& base, const HyperplaneReport& rep) {
  J j;
  j["coefficients"] = elem_rows(base, rep.coefficients);
  j["points_by_degree"] = long_list(rep.points_by_degree);
  j["verdict"] = verdict_name(rep.verdict);
  j["unramified_ok"] = rep.unramified_ok;
  j["undecided_sharpness"] = num(rep.undecided_sharpness);
  J fails = J::array();
  for (const auto& f : rep.failures) {
    GF ext(static_cast<long>(base.characteristic()), base.degree() * f.degree);
    J fj;
    fj["degree"] = num(f.degree);
    fj["monoid_values"] = elem_list(ext, f.point.monoid_values);
    fj["w_values"] = elem_list(ext, f.point.w_values);
    fj["fibers"] = elem_rows(ext, f.fibers);
    fails.push_back(std::move(fj));
  }
  j["failures"] = std::move(fails);
  return j;
}

inline J bertini_run_json(const GF& base, const BertiniRun& run) {
  J j;
  j["algorithm_version"] = run.algorithm_version;
  j["seed"] = num(run.seed);
  j["field"] = field_json(base);
  j["smooth_count"] = num(run.smooth_count);
  j["failing_count"] = num(run.failing_count);
  j["empty_count"] = num(run.empty_count);
  J reps = J::array();
  for (const auto& rep : run.reports) reps.push_back(hyperplane_json(base, rep));
  j["reports"] = std::move(reps);
  return j;
}

inline J blowup_json(const BlowupReport& r) {
  J charts = J::array();
  for (const auto& c : r.charts) {
    J cj;
    cj["chart"] = num(c.chart);
    cj["identities_checked"] = num(c.identities_checked);
    cj["identities_hold"] = c.identities_hold;
    cj["surjective"] = c.surjective;
    cj["exchange_ok"] = c.exchange_ok;
    cj["kernel_ok"] = c.kernel_ok;
    cj["identities"] = string_list(c.identities);
    cj["counterexample"] = c.counterexample;
    charts.push_back(std::move(cj));
  }
  J j;
  j["n"] = num(r.n);
  j["all_ok"] = r.all_ok;
  j["charts"] = std::move(charts);
  return j;
}

inline J gamma_json(const GammaIdealBasis& g) {
  J elems = J::array();
  for (const auto& e : g.elements) {
    J ej;
    ej["exponent"] = long_list(e.exponent);
    ej["pi_marked"] = e.pi_marked;
    elems.push_back(std::move(ej));
  }
  J j;
  j["n"] = num(g.n);
  j["d"] = num(g.d);
  j["cardinality"] = num(static_cast<long>(g.elements.size()));
  j["elements"] = std::move(elems);
  j["quotient_is_v_mod_pi"] = g.quotient_is_v_mod_pi;
  j["reduced_rank"] = num(g.reduced_rank);
  j["reduction_kernel_dim"] = num(g.reduction_kernel_dim);
  j["kernel_is_pi_marked_class"] = g.kernel_is_pi_marked_class;
  j["pointed_kernel_dim"] = num(g.pointed_kernel_dim);
  j["reduction_lands_in_pointed"] = g.reduction_lands_in_pointed;
  return j;
}

inline J dvr_scalar_list(const std::vector<DVRScalar>& v) {
  J a = J::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

inline J etale_json(const EtaleVerdict& v) {
  J j;
  j["conclusive"] = v.conclusive;
  j["reason"] = v.reason;
  j["etale_over_K"] = v.etale_over_K;
  j["nonempty"] = v.nonempty;
  j["special_fibre_finite"] = v.special_fibre_finite;
  j["chart_degree_0"] = num(v.chart_degree_0);
  j["chart_degree_1"] = num(v.chart_degree_1);
  return j;
}

}  // namespace logbertini::jsonio
