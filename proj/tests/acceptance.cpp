// One [PASS]/[FAIL] line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "test_support.hpp"
#include "torickems/torickems.hpp"

using namespace torickems;

namespace {

struct Outcome {
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("threw ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0) {
    std::ostringstream m;
    m << "took " << secs << " s, limit " << limit_s << " s";
    out.require(secs < limit_s, m.str());
  }
  std::printf("[%s] AC%d %s (%.2fs)%s%s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(), secs, out.ok ? "" : ": ",
              out.why.c_str());
  failures += !out.ok;
}

const CandidateStatus* find_label(const MISReport& r, const std::string& label) {
  for (const auto& c : r.candidates)
    if (c.candidate.label == label) return &c;
  return nullptr;
}

bool is_weyl_image(const FanoPolytope& fp, const LatticeVector& v, const LatticeVector& target) {
  for (const auto& g : weyl_group(fp.polytope))
    if (g.apply_dual(target) == v) return true;
  return false;
}

}  // namespace

int main() {
  criterion(1, "dP1 KE-MIS is E", 1.0, [](Outcome& o) {
    auto fx = find_fixture("dp1");
    auto fp = build_polytope(fx.rays);
    auto rep = analyze(fx, AnalysisMode::KE);
    const auto* plus = find_label(rep, "(+1)-curve");
    const auto* e = find_label(rep, "E");
    o.require(plus && e, "candidates missing");
    if (!o.ok) return;
    o.require(plus->excluded && is_weyl_image(fp, plus->certificate->vector, {-1, -1}),
              "(+1)-curve not excluded by (-1,-1) or a Weyl image");
    o.require(!e->excluded, "E was excluded");
    o.require(rep.conclusion == "KE-MIS = E", "conclusion: " + rep.conclusion);
  });

  criterion(2, "dP1 KRS excludes both candidates", 1.0, [](Outcome& o) {
    auto rep = analyze(find_fixture("dp1"), AnalysisMode::KRS);
    const auto* plus = find_label(rep, "(+1)-curve");
    const auto* e = find_label(rep, "E");
    o.require(plus && e, "candidates missing");
    if (!o.ok) return;
    o.require(e->excluded && e->certificate->vector == LatticeVector{1, 1}, "E certificate is not (1,1)");
    o.require(plus->excluded && plus->certificate->vector == LatticeVector{-1, -1},
              "(+1)-curve certificate is not (-1,-1)");
    o.require(rep.conclusion.find("no admissible candidate survives") != std::string::npos,
              "conclusion: " + rep.conclusion);
  });

  criterion(3, "Futaki signs from exact barycenters", 0, [](Outcome& o) {
    for (const char* name : {"dp1", "dp2"}) {
      auto c = oracle::centroid(oracle::dual_vertices(oracle_rays(name)));
      auto bary = exact_moments(build_polytope(find_fixture(name).rays).polytope).barycenter;
      o.require(bary == RationalVector{Rational(c[0].num, c[0].den), Rational(c[1].num, c[1].den)},
                std::string(name) + " barycenter differs from the shoelace centroid");
    }
    auto dp1 = build_polytope(find_fixture("dp1").rays).polytope;
    auto dp2 = build_polytope(find_fixture("dp2").rays).polytope;
    o.require(exact_moments(dp1).barycenter == RationalVector{Rational(1, 12), Rational(1, 12)}, "dp1 barycenter");
    o.require(exact_moments(dp2).barycenter == RationalVector{Rational(-2, 21), Rational(-2, 21)}, "dp2 barycenter");
    o.require(futaki(dp1, LatticeVector{-1, -1}) > 0, "F((-1,-1)) <= 0 on dP1");
    o.require(futaki(dp2, LatticeVector{1, 1}) > 0, "F((1,1)) <= 0 on dP2");
    for (const char* name : {"dp3", "cp2", "p1xp1"}) {
      auto p = build_polytope(find_fixture(name).rays).polytope;
      o.require(futaki(p, LatticeVector{1, 0}) == 0 && futaki(p, LatticeVector{0, 1}) == 0,
                std::string(name) + ": F does not vanish");
    }
  });

  criterion(4, "dP2 soliton vector", 0, [](Outcome& o) {
    auto p = build_polytope(find_fixture("dp2").rays).polytope;
    const auto t0 = std::chrono::steady_clock::now();
    auto sol = solve_soliton_vector(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 1.0, "solver took longer than 1 s");
    const double beta = sol.xi_s[0];
    o.require(beta > 0, "beta <= 0");
    o.require(std::fabs(sol.xi_s[0] - sol.xi_s[1]) <= 1e-10, "xi_s not diagonal");
    o.require(sol.grad_norm <= 1e-10, "gradient norm too large");
    o.require(std::fabs(sol.b - 3 * beta) <= 1e-12, "b != 3 beta");
    o.require(std::fabs(sol.threshold - (2 + sol.b) / (3 + sol.b)) <= 1e-15, "threshold != (2+b)/(3+b)");
    const double ref = oracle::diagonal_soliton(oracle_rays("dp2"));
    std::ostringstream m;
    m << "Newton " << beta << " vs bisection " << ref;
    o.require(std::fabs(beta - ref) <= 1e-9, m.str());
  });

  criterion(5, "Tian-Zhu route agreement", 30.0, [](Outcome& o) {
    for (const char* name : {"dp1", "dp2"}) {
      auto fp = build_polytope(find_fixture(name).rays);
      PotentialModel model(fp);
      const std::vector<Eigen::Vector2d> etas{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
      for (double c : {0.0, 0.3, -0.3}) {
        const Eigen::Vector2d xi(c, c);
        auto direct = tian_zhu_direct(model, fp.polytope, xi);
        double first = 0.0;
        for (const auto& eta : etas) {
          const double poly = tian_zhu_polytope(fp.polytope, xi, eta);
          const double dir = direct(eta);
          // (1,-1) is a symmetry direction: both routes vanish and no ratio exists
          if (std::fabs(poly) < 1e-8) {
            o.require(std::fabs(dir) < 1e-8, std::string(name) + ": direct route nonzero where polytope is zero");
            continue;
          }
          const double ratio = dir / poly;
          if (first == 0.0) first = ratio;
          std::ostringstream m;
          m << name << " xi=" << c << ": ratio " << ratio << " vs " << first;
          o.require(ratio > 0 && std::fabs(ratio - first) <= 1e-4 * first, m.str());
        }
      }
      auto sol = solve_soliton_vector(fp.polytope);
      auto direct = tian_zhu_direct(model, fp.polytope, sol.xi_s);
      for (const auto& eta : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}) {
        o.require(std::fabs(direct(eta)) <= 1e-6, std::string(name) + ": direct route nonzero at xi_s");
        o.require(std::fabs(tian_zhu_polytope(fp.polytope, sol.xi_s, eta)) <= 1e-6,
                  std::string(name) + ": polytope route nonzero at xi_s");
      }
    }
  });

  criterion(6, "dP2 moment-map limits", 0, [](Outcome& o) {
    auto fp = build_polytope(find_fixture("dp2").rays);
    PotentialModel model(fp);
    auto up = evaluate_potential(model, Eigen::Vector2d(0, 40)).grad;
    auto dn = evaluate_potential(model, Eigen::Vector2d(0, -40)).grad;
    o.require((up - Eigen::Vector2d(-0.5, 1)).norm() <= 1e-6, "limit at (0, 40)");
    o.require((dn - Eigen::Vector2d(0, -1)).norm() <= 1e-6, "limit at (0, -40)");
  });

  criterion(7, "dP2 flow MIS", 60.0, [](Outcome& o) {
    auto rep = flow_mis_report(find_fixture("dp2"));
    auto cls = [&](const std::string& id) -> const FacetFlow* {
      for (const auto& f : rep.facets)
        if (f.face_id == id) return &f;
      return nullptr;
    };
    for (const char* id : {"F(0,1)", "F(1,0)", "F(1,1)"}) {
      const auto* f = cls(id);
      o.require(f != nullptr, std::string("missing ") + id);
      if (!f) return;
      for (const auto& c : f->classes) o.require(c.kind == Growth::Divergent, std::string(id) + " not divergent");
    }
    for (const char* id : {"F(0,-1)", "F(-1,0)"}) {
      const auto* f = cls(id);
      o.require(f != nullptr, std::string("missing ") + id);
      if (!f) return;
      for (const auto& c : f->classes) o.require(c.kind == Growth::Bounded, std::string(id) + " not bounded");
    }
    const auto* axis = cls("F(0,1)");
    for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
      const double expected = (2 * rep.alphas[a] - 1) * rep.beta;
      std::ostringstream m;
      m << "slope " << axis->classes[a].slope << " vs " << expected << " at alpha " << rep.alphas[a];
      o.require(std::fabs(axis->classes[a].slope - expected) <= 0.1 * expected, m.str());
    }
    o.require(rep.mis.size() == 3, "MIS does not have three facets");
    for (auto r : rep.mis) o.require(rep.facets[r].self_intersection == -1, "MIS facet is not a (-1)-curve");
  });

  criterion(8, "dP1 flow MIS", 60.0, [](Outcome& o) {
    auto rep = flow_mis_report(find_fixture("dp1"));
    o.require(rep.mis_face_ids == std::vector<std::string>{"F(-1,-1)"}, "conclusion: " + rep.conclusion);
  });

  criterion(9, "property suites", 60.0, [](Outcome& o) {
    for (const auto& r : run_selftest()) o.require(r.passed, r.group + "." + r.name + ": " + r.detail);
  });

  return failures;
}
