#pragma once

// JSON and plain-text rendering of analysis results.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torickems/exact.hpp"
#include "torickems/flow_mis.hpp"
#include "torickems/invariants.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/mis_analyzer.hpp"

namespace torickems {

using Json = nlohmann::ordered_json;

inline std::string rational_string(const Rational& r) { return r.str(); }

inline Json to_json(const LatticeVector& v) { return v.coords(); }

inline Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(rational_string(r));
  return a;
}

struct PolytopeSummary {
  std::string fixture;
  FanoPolytope fp;
  Moments moments;
  std::size_t weyl_order = 0;
  std::vector<int> self_intersections;  // empty unless n = 2
  /// F on the standard basis, exact.
  std::vector<Rational> futaki_basis;
  std::optional<SolitonResult> soliton;
};

inline PolytopeSummary summarize(const Fixture& fixture, bool with_soliton = true, double tol = 1e-12) {
  PolytopeSummary s{fixture.name, build_polytope(fixture.rays), {}, 0, {}, {}, std::nullopt};
  s.moments = exact_moments(s.fp.polytope);
  s.weyl_order = weyl_group(s.fp.polytope).size();
  if (s.fp.fan.dim == 2) s.self_intersections = self_intersections(s.fp.fan);
  const std::size_t n = s.fp.polytope.dim();
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector e(n, Rational(0));
    e[i] = 1;
    s.futaki_basis.push_back(futaki(s.fp.polytope, e));
  }
  if (with_soliton) s.soliton = solve_soliton_vector(s.fp.polytope, tol);
  return s;
}

inline Json soliton_json(const SolitonResult& r) {
  Json j;
  j["xi_s"] = to_json(r.xi_s);
  j["grad_norm"] = r.grad_norm;
  j["iterations"] = r.iterations;
  j["alpha_v"] = r.alpha_v;
  j["beta_v"] = r.beta_v;
  j["b"] = r.b;
  j["threshold"] = r.threshold;
  return j;
}

inline Json summary_json(const PolytopeSummary& s) {
  Json j;
  j["dimension"] = s.fp.polytope.dim();
  j["rays"] = Json::array();
  for (const auto& r : s.fp.fan.rays) j["rays"].push_back(to_json(r));
  j["vertices"] = Json::array();
  for (const auto& v : s.fp.polytope.vertices()) j["vertices"].push_back(to_json(v));
  j["lattice_points"] = s.fp.polytope.lattice_points().size();
  j["weyl_order"] = s.weyl_order;
  if (!s.self_intersections.empty()) {
    j["self_intersections"] = Json::object();
    for (std::size_t r = 0; r < s.fp.fan.rays.size(); ++r)
      j["self_intersections"][facet_id(s.fp.fan.rays[r])] = s.self_intersections[r];
  }
  j["volume"] = rational_string(s.moments.volume);
  j["barycenter"] = to_json(s.moments.barycenter);
  j["futaki_on_basis"] = to_json(s.futaki_basis);
  bool zero = std::all_of(s.futaki_basis.begin(), s.futaki_basis.end(), [](const Rational& r) { return r == 0; });
  j["futaki_vanishes"] = zero;
  if (s.soliton) j["soliton"] = soliton_json(*s.soliton);
  return j;
}

inline Json certificate_witness_json(const FaceContext& ctx, const ExclusionCertificate& c) {
  Json w;
  w["kind"] = to_string(c.kind);
  w["vertex_pairings"] = Json::array();
  for (const auto& [k, v] : c.vertex_pairings) {
    Json e;
    e["vertex"] = to_json(ctx.fp->polytope.vertices()[k]);
    e["pairing"] = rational_string(v);
    w["vertex_pairings"].push_back(e);
  }
  if (c.barycenter_pairing) w["barycenter_pairing"] = rational_string(*c.barycenter_pairing);
  return w;
}

/// {"fixture", "mode", "candidates": [{"faces", "status", "certificate"}], "conclusion"} plus extras.
inline Json mis_report_json(const MISReport& rep, const FaceContext& ctx) {
  Json j;
  j["fixture"] = rep.fixture;
  j["mode"] = rep.mode;
  j["candidates"] = Json::array();
  for (const auto& st : rep.candidates) {
    Json c;
    c["faces"] = st.candidate.face_ids;
    c["label"] = st.candidate.label;
    c["status"] = st.excluded ? "excluded" : "survives";
    c["certificate"] = st.certificate ? to_json(st.certificate->vector) : Json(nullptr);
    c["witness"] = st.certificate ? certificate_witness_json(ctx, *st.certificate) : Json(nullptr);
    c["connected"] = st.candidate.connected;
    c["w_invariant"] = st.candidate.w_invariant;
    if (!st.candidate.note.empty()) c["note"] = st.candidate.note;
    j["candidates"].push_back(c);
  }
  j["conclusion"] = rep.conclusion;
  return j;
}

inline Json flow_report_json(const FlowReport& rep, const FlowOptions& opt) {
  Json j;
  j["fixture"] = rep.fixture;
  j["mode"] = "FLOW";
  j["candidates"] = Json::array();
  for (const auto& ff : rep.facets) {
    Json c;
    c["faces"] = Json::array({ff.face_id});
    bool all_div = std::all_of(ff.classes.begin(), ff.classes.end(),
                               [](const GrowthClass& g) { return g.kind == Growth::Divergent; });
    bool all_bdd = std::all_of(ff.classes.begin(), ff.classes.end(),
                               [](const GrowthClass& g) { return g.kind == Growth::Bounded; });
    c["status"] = all_div ? "divergent" : all_bdd ? "bounded" : "inconclusive";
    c["certificate"] = nullptr;
    c["self_intersection"] = ff.self_intersection;
    c["bound_respected"] = ff.bound_respected;
    c["per_alpha"] = Json::array();
    for (std::size_t a = 0; a < ff.classes.size(); ++a) {
      Json e;
      e["alpha"] = rep.alphas[a];
      e["class"] = to_string(ff.classes[a].kind);
      e["slope"] = ff.classes[a].slope;
      e["fit_residual"] = ff.classes[a].residual;
      if (ff.classes[a].kind == Growth::Divergent) e["relative_deviation"] = ff.classes[a].relative_deviation;
      c["per_alpha"].push_back(e);
    }
    j["candidates"].push_back(c);
  }
  j["mis"] = rep.mis_face_ids;
  j["completed_by_connectedness"] = Json::array();
  for (auto r : rep.completed) j["completed_by_connectedness"].push_back(rep.facets[r].face_id);
  j["completion_consistent"] = rep.completion_consistent;
  j["alpha_stable"] = rep.alpha_stable;
  j["xi_s"] = to_json(rep.xi_s);
  j["beta"] = rep.beta;
  j["t_grid"] = rep.t_grid;
  j["thresholds"] = {{"divergent_slope", opt.thresholds.divergent},
                     {"bounded_slope", opt.thresholds.bounded},
                     {"reference_alpha", opt.thresholds.reference_alpha}};
  j["region"] = {{"eps", opt.eps}, {"s0", opt.s0}};
  j["sup_check"] = rep.sup_check;
  j["conclusion"] = rep.conclusion;
  return j;
}

inline Json roots_json(const FanoPolytope& fp, const std::vector<DemazureRoot>& roots) {
  Json j = Json::array();
  for (const auto& r : roots) {
    Json e;
    e["m"] = to_json(r.m);
    e["distinguished_ray"] = to_json(fp.fan.rays[r.distinguished_ray]);
    j.push_back(e);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Text

inline std::string summary_text(const PolytopeSummary& s) {
  std::ostringstream o;
  o.precision(12);
  o << "fixture " << s.fixture << "\n  vertices:";
  for (const auto& v : s.fp.polytope.vertices()) o << ' ' << v.to_string();
  o << "\n  |L(Delta)| = " << s.fp.polytope.lattice_points().size() << ", |W| = " << s.weyl_order
    << ", vol = " << s.moments.volume << ", barycenter = (";
  for (std::size_t i = 0; i < s.moments.barycenter.size(); ++i) o << (i ? ", " : "") << s.moments.barycenter[i];
  o << ")\n  F(e_i):";
  for (const auto& f : s.futaki_basis) o << ' ' << f;
  o << '\n';
  if (s.soliton) {
    o << "  soliton xi_s = (" << s.soliton->xi_s.transpose() << "), b = " << s.soliton->b
      << ", threshold = " << s.soliton->threshold << '\n';
  }
  return o.str();
}

inline std::string mis_report_text(const MISReport& rep) {
  std::ostringstream o;
  o << rep.mode << " analysis of " << rep.fixture << '\n';
  for (const auto& st : rep.candidates) {
    o << "  " << st.candidate.label << ": ";
    if (st.excluded) {
      o << "excluded by " << st.certificate->vector.to_string();
    } else {
      o << "survives";
    }
    if (!st.candidate.note.empty()) o << " (" << st.candidate.note << ')';
    o << '\n';
  }
  o << "conclusion: " << rep.conclusion << '\n';
  return o.str();
}

inline std::string flow_report_text(const FlowReport& rep) {
  std::ostringstream o;
  o.precision(6);
  o << "flow analysis of " << rep.fixture << ", xi_s = (" << rep.xi_s.transpose() << ")\n";
  for (const auto& ff : rep.facets) {
    o << "  " << ff.face_id << " (self-intersection " << ff.self_intersection << "):";
    for (std::size_t a = 0; a < ff.classes.size(); ++a)
      o << "  alpha " << rep.alphas[a] << ' ' << to_string(ff.classes[a].kind) << " slope " << ff.classes[a].slope;
    o << '\n';
  }
  o << "conclusion: " << rep.conclusion << '\n';
  return o.str();
}

}  // namespace torickems
