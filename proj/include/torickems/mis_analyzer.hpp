#pragma once

// Torus-invariant MIS candidates (unions of closed faces of Delta) and the two
// exclusion tests: the half-polytope test for KE and the Z+ test for KRS.
// All decisions are made in exact rational arithmetic.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"
#include "torickems/fixtures.hpp"
#include "torickems/lattice_polytope.hpp"

namespace torickems {

enum class AnalysisMode { KE, KRS };

inline std::string to_string(AnalysisMode m) { return m == AnalysisMode::KE ? "KE" : "KRS"; }

/// Shared combinatorial context for candidate work on one polytope.
struct FaceContext {
  const FanoPolytope* fp = nullptr;
  std::vector<Face> faces;
  std::vector<LatticeSymmetry> weyl;
  /// face_image[g][f]: index of g(F).
  std::vector<std::vector<std::size_t>> face_image;

  explicit FaceContext(const FanoPolytope& poly) : fp(&poly), faces(face_lattice(poly)), weyl(weyl_group(poly.polytope)) {
    const auto& verts = poly.polytope.vertices();
    std::map<std::vector<std::size_t>, std::size_t> by_vertices;
    for (std::size_t f = 0; f < faces.size(); ++f) by_vertices[faces[f].vertex_ids] = f;
    for (const auto& g : weyl) {
      std::vector<std::size_t> vperm(verts.size());
      for (std::size_t k = 0; k < verts.size(); ++k)
        vperm[k] = static_cast<std::size_t>(std::find(verts.begin(), verts.end(), g.apply(verts[k])) - verts.begin());
      std::vector<std::size_t> img(faces.size());
      for (std::size_t f = 0; f < faces.size(); ++f) {
        std::vector<std::size_t> vs;
        for (auto k : faces[f].vertex_ids) vs.push_back(vperm[k]);
        std::sort(vs.begin(), vs.end());
        img[f] = by_vertices.at(vs);
      }
      face_image.push_back(std::move(img));
    }
  }

  std::size_t face_index(const std::string& id) const {
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].id == id) return f;
    throw Error(ErrorKind::InvalidInput, "unknown face id '" + id + "'");
  }

  bool contains_face(std::size_t outer, std::size_t inner) const {
    const auto& a = faces[outer].vertex_ids;
    const auto& b = faces[inner].vertex_ids;
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
  }

  /// Keeps only faces not contained in another listed face.
  std::vector<std::size_t> maximal(std::vector<std::size_t> ids) const {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::size_t> out;
    for (auto f : ids) {
      bool covered = false;
      for (auto g : ids)
        if (g != f && contains_face(g, f)) covered = true;
      if (!covered) out.push_back(f);
    }
    return out;
  }
};

struct Candidate {
  std::vector<std::size_t> faces;  // maximal faces, by index into FaceContext::faces
  std::vector<std::string> face_ids;
  bool connected = false;
  bool w_invariant = false;
  std::string label;
  std::string note;
};

struct ExclusionCertificate {
  AnalysisMode kind = AnalysisMode::KE;
  LatticeVector vector;
  /// <v, vector> for each candidate vertex id.
  std::vector<std::pair<std::size_t, Rational>> vertex_pairings;
  /// KE only: <barycenter, vector> (< 0).
  std::optional<Rational> barycenter_pairing;
};

inline std::vector<std::size_t> candidate_vertices(const FaceContext& ctx, const Candidate& c) {
  std::set<std::size_t> vs;
  for (auto f : c.faces) vs.insert(ctx.faces[f].vertex_ids.begin(), ctx.faces[f].vertex_ids.end());
  return {vs.begin(), vs.end()};
}

/// Connectivity on the incidence graph: closed faces meet iff they share a vertex.
inline bool faces_connected(const FaceContext& ctx, const std::vector<std::size_t>& faces) {
  if (faces.empty()) return false;
  std::vector<bool> seen(faces.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  auto meet = [&](std::size_t a, std::size_t b) {
    const auto& x = ctx.faces[faces[a]].vertex_ids;
    const auto& y = ctx.faces[faces[b]].vertex_ids;
    return std::find_first_of(x.begin(), x.end(), y.begin(), y.end()) != x.end();
  };
  while (!stack.empty()) {
    auto a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < faces.size(); ++b)
      if (!seen[b] && meet(a, b)) {
        seen[b] = true;
        stack.push_back(b);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

inline bool faces_w_invariant(const FaceContext& ctx, const std::vector<std::size_t>& faces) {
  std::set<std::size_t> s(faces.begin(), faces.end());
  for (const auto& img : ctx.face_image)
    for (auto f : faces)
      if (!s.count(img[f])) return false;
  return true;
}

inline Candidate make_candidate(const FaceContext& ctx, std::vector<std::size_t> faces,
                                const std::map<std::string, std::string>& labels = {}) {
  Candidate c;
  c.faces = ctx.maximal(std::move(faces));
  std::string label;
  for (auto f : c.faces) {
    c.face_ids.push_back(ctx.faces[f].id);
    if (!label.empty()) label += " + ";
    auto it = labels.find(ctx.faces[f].id);
    label += it != labels.end() ? it->second : ctx.faces[f].id;
  }
  c.label = label;
  c.connected = faces_connected(ctx, c.faces);
  c.w_invariant = faces_w_invariant(ctx, c.faces);
  return c;
}

/// mu(V) lies in D^{<=0}(xi) = {y in Delta : <y, xi> <= 0}; checked on vertices.
inline bool d_le0_contains(const FaceContext& ctx, const Candidate& c, const RationalVector& xi) {
  const auto& verts = ctx.fp->polytope.vertices();
  for (auto k : candidate_vertices(ctx, c))
    if (dot(xi, verts[k]) > 0) return false;
  return true;
}

namespace detail {
inline bool in_span(const std::vector<LatticeVector>& gens, const RationalVector& v, std::size_t n) {
  RationalMatrix m = exact::from_lattice_rows(gens);
  const auto r = exact::rank(m, n);
  m.push_back(v);
  return exact::rank(m, n) == r;
}
}  // namespace detail

/// Each candidate face is fixed pointwise by v_eta (eta in the span of its dual
/// cone) and the divergence -<y, eta> is positive at every candidate vertex.
inline bool z_plus_contains(const FaceContext& ctx, const Candidate& c, const RationalVector& eta) {
  const auto& rays = ctx.fp->fan.rays;
  const std::size_t n = ctx.fp->polytope.dim();
  for (auto f : c.faces) {
    std::vector<LatticeVector> gens;
    for (auto r : ctx.faces[f].dual_cone) gens.push_back(rays[r]);
    if (!detail::in_span(gens, eta, n)) return false;
  }
  const auto& verts = ctx.fp->polytope.vertices();
  for (auto k : candidate_vertices(ctx, c))
    if (dot(eta, verts[k]) >= 0) return false;
  return true;
}

inline bool verify_certificate(const FaceContext& ctx, const Candidate& c, const ExclusionCertificate& cert) {
  const RationalVector v = to_rational(cert.vector);
  if (cert.kind == AnalysisMode::KE) {
    auto m = exact_moments(ctx.fp->polytope);
    return dot(m.barycenter, v) < 0 && d_le0_contains(ctx, c, v);
  }
  return z_plus_contains(ctx, c, v);
}

namespace detail {

inline ExclusionCertificate fill_pairings(const FaceContext& ctx, const Candidate& c, AnalysisMode kind,
                                          const LatticeVector& v) {
  ExclusionCertificate cert;
  cert.kind = kind;
  cert.vector = v;
  const auto& verts = ctx.fp->polytope.vertices();
  for (auto k : candidate_vertices(ctx, c)) cert.vertex_pairings.emplace_back(k, Rational(dot(verts[k], v)));
  if (kind == AnalysisMode::KE) cert.barycenter_pairing = dot(exact_moments(ctx.fp->polytope).barycenter, v);
  return cert;
}

}  // namespace detail

/// Looks for xi with <bary, xi> < 0 and <v, xi> <= 0 on every candidate vertex.
/// Such xi exists iff some generator of that cone pairs negatively with bary;
/// the certificate is the sum of those generators, averaged over the Weyl
/// group when the candidate is invariant, as a primitive vector.
inline std::optional<ExclusionCertificate> ke_obstruction_search(const FaceContext& ctx, const Candidate& c) {
  const auto& p = ctx.fp->polytope;
  const std::size_t n = p.dim();
  const auto bary = exact_moments(p).barycenter;
  if (std::all_of(bary.begin(), bary.end(), [](const Rational& r) { return r == 0; })) return std::nullopt;

  RationalMatrix rows;
  for (auto k : candidate_vertices(ctx, c)) rows.push_back(to_rational(p.vertices()[k]));
  auto gens = exact::cone_generators(rows, n);
  RationalVector sum(n, Rational(0));
  bool found = false;
  auto take = [&](const RationalVector& g) {
    if (dot(bary, g) < 0) {
      for (std::size_t i = 0; i < n; ++i) sum[i] += g[i];
      found = true;
    }
  };
  for (const auto& g : gens.rays) take(g);
  for (auto g : gens.lineality) {
    take(g);
    for (auto& x : g) x = -x;
    take(g);
  }
  if (!found) return std::nullopt;
  if (c.w_invariant) {
    RationalVector avg(n, Rational(0));
    const auto s = primitive_multiple(sum);
    for (const auto& g : ctx.weyl) {
      auto img = g.apply_dual(s);
      for (std::size_t i = 0; i < n; ++i) avg[i] += img[i];
    }
    // the average stays in the (invariant) cone and keeps the sign against bary
    if (std::any_of(avg.begin(), avg.end(), [](const Rational& r) { return r != 0; })) sum = avg;
  }
  auto cert = detail::fill_pairings(ctx, c, AnalysisMode::KE, primitive_multiple(sum));
  if (!verify_certificate(ctx, c, cert)) throw Error(ErrorKind::InvalidInput, "internal: KE certificate failed");
  return cert;
}

/// Looks for eta in the intersection of the dual-cone spans of the candidate
/// faces with <v, eta> < 0 on every candidate vertex.
inline std::optional<ExclusionCertificate> krs_obstruction_search(const FaceContext& ctx, const Candidate& c) {
  const auto& p = ctx.fp->polytope;
  const auto& rays = ctx.fp->fan.rays;
  const std::size_t n = p.dim();
  // S = intersection of spans = orthogonal complement of the sum of complements.
  RationalMatrix complements;
  for (auto f : c.faces) {
    RationalMatrix gens;
    for (auto r : ctx.faces[f].dual_cone) gens.push_back(to_rational(rays[r]));
    for (auto& v : exact::nullspace(gens, n)) complements.push_back(std::move(v));
  }
  auto basis = complements.empty() ? exact::nullspace(RationalMatrix{}, n) : exact::nullspace(complements, n);
  if (basis.empty()) return std::nullopt;

  // Restrict <v, eta> <= 0 to z-coordinates on S and take a relative-interior point.
  RationalMatrix rows;
  for (auto k : candidate_vertices(ctx, c)) {
    RationalVector row;
    for (const auto& b : basis) row.push_back(dot(b, p.vertices()[k]));
    if (std::all_of(row.begin(), row.end(), [](const Rational& r) { return r == 0; })) return std::nullopt;
    rows.push_back(std::move(row));
  }
  auto gens = exact::cone_generators(rows, basis.size());
  if (gens.rays.empty()) return std::nullopt;
  RationalVector z(basis.size(), Rational(0));
  for (const auto& g : gens.rays)
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += g[i];
  for (const auto& row : rows)
    if (dot(row, z) >= 0) return std::nullopt;
  RationalVector eta(n, Rational(0));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) eta[i] += z[j] * basis[j][i];
  auto cert = detail::fill_pairings(ctx, c, AnalysisMode::KRS, primitive_multiple(eta));
  if (!verify_certificate(ctx, c, cert)) throw Error(ErrorKind::InvalidInput, "internal: KRS certificate failed");
  return cert;
}

struct CandidateOptions {
  /// Ignore a fixture's admissible list and enumerate orbit unions.
  bool enumerate = false;
  std::size_t max_orbits = 20;
};

/// Face orbits under the Weyl group, each sorted, in order of first face.
inline std::vector<std::vector<std::size_t>> face_orbits(const FaceContext& ctx) {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<bool> seen(ctx.faces.size(), false);
  for (std::size_t f = 0; f < ctx.faces.size(); ++f) {
    if (seen[f]) continue;
    std::set<std::size_t> orb;
    for (const auto& img : ctx.face_image) orb.insert(img[f]);
    for (auto g : orb) seen[g] = true;
    orbits.emplace_back(orb.begin(), orb.end());
  }
  return orbits;
}

/// Weyl-invariant connected unions of closed proper faces, or the fixture's
/// admissible list (validated) when it has one.
inline std::vector<Candidate> enumerate_candidates(const FaceContext& ctx, const Fixture& fixture,
                                                   const CandidateOptions& opt = {}) {
  std::vector<Candidate> out;
  if (fixture.admissible_candidates && !opt.enumerate) {
    for (const auto& ids : *fixture.admissible_candidates) {
      std::vector<std::size_t> faces;
      for (const auto& id : ids) faces.push_back(ctx.face_index(id));
      auto c = make_candidate(ctx, faces, fixture.labels);
      if (!c.w_invariant) throw Error(ErrorKind::InvalidInput, "admissible candidate " + c.label + " is not Weyl-invariant");
      if (!c.connected) throw Error(ErrorKind::InvalidInput, "admissible candidate " + c.label + " is not connected");
      out.push_back(std::move(c));
    }
    return out;
  }
  auto orbits = face_orbits(ctx);
  if (orbits.size() > opt.max_orbits)
    throw Error(ErrorKind::TooManyOrbits, std::to_string(orbits.size()) + " face orbits exceed the limit of " +
                                              std::to_string(opt.max_orbits));
  std::set<std::vector<std::size_t>> seen;
  std::set<std::string> admissible;
  if (fixture.admissible_candidates)
    for (const auto& ids : *fixture.admissible_candidates) {
      std::vector<std::size_t> faces;
      for (const auto& id : ids) faces.push_back(ctx.face_index(id));
      admissible.insert(make_candidate(ctx, faces).label);
    }
  const std::size_t k = orbits.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> faces;
    for (std::size_t o = 0; o < k; ++o)
      if (mask & (std::size_t{1} << o)) faces.insert(faces.end(), orbits[o].begin(), orbits[o].end());
    auto c = make_candidate(ctx, faces, fixture.labels);
    if (!seen.insert(c.faces).second || !c.connected) continue;
    if (fixture.admissible_candidates && !admissible.count(make_candidate(ctx, c.faces).label))
      c.note = "excluded only under the extended symmetry recorded in the fixture";
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.faces.size() != b.faces.size()) return a.faces.size() < b.faces.size();
    return a.faces < b.faces;
  });
  return out;
}

struct CandidateStatus {
  Candidate candidate;
  bool excluded = false;
  std::optional<ExclusionCertificate> certificate;
};

struct MISReport {
  std::string fixture;
  std::string mode;  // "KE", "KRS" or "FLOW"
  std::vector<CandidateStatus> candidates;
  std::string conclusion;
  bool futaki_vanishes = false;
};

inline std::string join_labels(const std::vector<const Candidate*>& cs) {
  std::string s;
  for (const auto* c : cs) {
    if (!s.empty()) s += "; ";
    s += c->label;
  }
  return s;
}

inline MISReport analyze(const Fixture& fixture, AnalysisMode mode, const CandidateOptions& opt = {}) {
  auto fp = build_polytope(fixture.rays);
  FaceContext ctx(fp);
  MISReport report;
  report.fixture = fixture.name;
  report.mode = to_string(mode);
  const auto bary = exact_moments(fp.polytope).barycenter;
  report.futaki_vanishes = std::all_of(bary.begin(), bary.end(), [](const Rational& r) { return r == 0; });
  if (mode == AnalysisMode::KE && report.futaki_vanishes) {
    report.conclusion = "F = 0 identically; KE exists, no MIS analysis needed";
    return report;
  }
  for (auto& c : enumerate_candidates(ctx, fixture, opt)) {
    CandidateStatus st;
    st.certificate = mode == AnalysisMode::KE ? ke_obstruction_search(ctx, c) : krs_obstruction_search(ctx, c);
    st.excluded = st.certificate.has_value();
    st.candidate = std::move(c);
    report.candidates.push_back(std::move(st));
  }
  std::vector<const Candidate*> survivors;
  for (const auto& st : report.candidates)
    if (!st.excluded) survivors.push_back(&st.candidate);
  if (mode == AnalysisMode::KE) {
    if (survivors.size() == 1) {
      report.conclusion = "KE-MIS = " + survivors.front()->label;
    } else if (survivors.empty()) {
      report.conclusion = "every candidate is excluded; no KE-MIS among the candidates";
    } else {
      report.conclusion = "KE-MIS not determined by the exclusion test; surviving candidates: " + join_labels(survivors);
    }
  } else {
    if (survivors.empty()) {
      report.conclusion =
          "no admissible candidate survives => consistent with existence of a Kaehler-Ricci soliton";
    } else {
      report.conclusion = "surviving candidates: " + join_labels(survivors);
    }
  }
  return report;
}

}  // namespace torickems
