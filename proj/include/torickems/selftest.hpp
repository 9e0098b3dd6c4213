#pragma once

// Property suite run by `torickems selftest`. Each property returns an empty
// string on success and a short failure description otherwise.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "torickems/fixtures.hpp"
#include "torickems/flow_mis.hpp"
#include "torickems/invariants.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/mis_analyzer.hpp"
#include "torickems/potentials.hpp"
#include "torickems/quadrature.hpp"

namespace torickems {

struct Property {
  std::string group;
  std::string name;
  std::function<std::string()> check;
};

struct PropertyResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace selftest_detail {

struct Built {
  Fixture fixture;
  FanoPolytope fp;
  std::unique_ptr<PotentialModel> model;
};

inline const std::vector<Built>& built_fixtures() {
  static const std::vector<Built> all = [] {
    std::vector<Built> v;
    for (const auto& f : fixture_catalog()) {
      Built b{f, build_polytope(f.rays), nullptr};
      b.model = std::make_unique<PotentialModel>(b.fp);
      v.push_back(std::move(b));
    }
    return v;
  }();
  return all;
}

inline const Built& built(const std::string& name) {
  for (const auto& b : built_fixtures())
    if (b.fixture.name == name) return b;
  throw Error(ErrorKind::InvalidInput, "unknown fixture " + name);
}

inline std::string fmt(double x) {
  std::ostringstream o;
  o.precision(10);
  o << x;
  return o.str();
}

inline std::vector<Eigen::VectorXd> random_points(std::size_t count, std::size_t dim, double radius, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
    for (auto& c : x) c = u(rng);
    out.push_back(x);
  }
  return out;
}

inline std::vector<Eigen::VectorXd> random_in_ball(std::size_t count, std::size_t dim, double radius, unsigned seed) {
  auto pts = random_points(4 * count, dim, radius, seed);
  std::vector<Eigen::VectorXd> out;
  for (auto& p : pts)
    if (p.norm() <= radius && out.size() < count) out.push_back(p);
  return out;
}

// Facet normals of conv(vertices), recomputed from the vertex list alone.
inline std::vector<LatticeVector> facet_normals_from_vertices(const std::vector<LatticeVector>& verts, std::size_t n) {
  std::set<LatticeVector> normals;
  detail::for_each_subset(verts.size(), n, [&](const std::vector<std::size_t>& pick) {
    RationalMatrix a;
    for (auto k : pick) a.push_back(to_rational(verts[k]));
    auto sol = exact::solve(a, RationalVector(n, Rational(1)));
    if (!sol) return;
    for (const auto& v : verts)
      if (dot(*sol, v) > 1) return;
    normals.insert(to_lattice(*sol));
  });
  return {normals.begin(), normals.end()};
}

}  // namespace selftest_detail

inline std::vector<Property> property_suite() {
  using namespace selftest_detail;
  std::vector<Property> props;
  auto add = [&](std::string group, std::string name, std::function<std::string()> f) {
    props.push_back({std::move(group), std::move(name), std::move(f)});
  };

  // ---- lattice polytope
  add("polytope", "pick_theorem", [] {
    for (const auto& b : built_fixtures()) {
      const auto& p = b.fp.polytope;
      std::size_t interior = 0, boundary = 0;
      for (const auto& m : p.lattice_points()) {
        bool on = false;
        for (const auto& r : p.rays())
          if (dot(m, r) == 1) on = true;
        (on ? boundary : interior)++;
      }
      Rational pick = Rational(static_cast<long long>(interior)) + Rational(static_cast<long long>(boundary), 2) - 1;
      if (pick != exact_moments(p).volume) return b.fixture.name + ": Pick count " + pick.str();
    }
    return std::string();
  });
  add("polytope", "duality_roundtrip", [] {
    for (const auto& b : built_fixtures()) {
      auto normals = facet_normals_from_vertices(b.fp.polytope.vertices(), b.fp.polytope.dim());
      auto rays = b.fp.fan.rays;
      std::sort(rays.begin(), rays.end());
      if (normals != rays) return b.fixture.name + ": recomputed facet normals differ";
      if (build_polytope(normals).polytope.vertices() != b.fp.polytope.vertices())
        return b.fixture.name + ": rebuilt vertices differ";
    }
    return std::string();
  });
  add("polytope", "weyl_group_axioms", [] {
    for (const auto& b : built_fixtures()) {
      auto w = weyl_group(b.fp.polytope);
      auto has = [&](const IntMatrix& m) {
        return std::any_of(w.begin(), w.end(), [&](const LatticeSymmetry& s) { return s.matrix == m; });
      };
      for (const auto& g : w)
        for (const auto& h : w)
          if (!has(g.matrix * h.matrix)) return b.fixture.name + ": not closed under composition";
      for (const auto& g : w)
        if (!has(g.dual_matrix().transpose())) return b.fixture.name + ": missing inverse";
    }
    return std::string();
  });
  add("polytope", "weyl_maps_faces", [] {
    for (const auto& b : built_fixtures()) {
      FaceContext ctx(b.fp);
      auto selfint = self_intersections(b.fp.fan);
      for (const auto& img : ctx.face_image)
        for (std::size_t f = 0; f < ctx.faces.size(); ++f) {
          const auto& a = ctx.faces[f];
          const auto& g = ctx.faces[img[f]];
          if (a.dim != g.dim) return b.fixture.name + ": face dimension changed";
          if (a.dim == 1 && selfint[a.dual_cone[0]] != selfint[g.dual_cone[0]])
            return b.fixture.name + ": self-intersection label changed";
        }
    }
    return std::string();
  });
  add("polytope", "weyl_fixes_barycenter", [] {
    for (const auto& b : built_fixtures()) {
      auto bary = exact_moments(b.fp.polytope).barycenter;
      for (const auto& g : weyl_group(b.fp.polytope)) {
        RationalVector img(bary.size(), Rational(0));
        for (std::size_t i = 0; i < bary.size(); ++i)
          for (std::size_t j = 0; j < bary.size(); ++j)
            img[i] += Rational(g.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) * bary[j];
        if (img != bary) return b.fixture.name + ": barycenter moved";
      }
    }
    return std::string();
  });
  add("polytope", "cp2_demazure_roots", [] {
    const auto& b = built("cp2");
    auto roots = demazure_roots(b.fp);
    if (roots.size() != 6) return "found " + std::to_string(roots.size()) + " roots";
    for (const auto& r : roots)
      if (dot(r.m, b.fp.fan.rays[r.distinguished_ray]) != -1) return r.m.to_string() + " pairs wrongly";
    return std::string();
  });
  add("polytope", "perturbed_fixture_rejected", [] {
    try {
      build_polytope({{2, 1}, {-1, 0}, {-1, -1}, {0, -1}});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotSmooth) return std::string();
      return std::string("wrong error: ") + e.what();
    }
    return std::string("perturbed dP1 was accepted");
  });

  // ---- quadrature
  add("quadrature", "exp_integral_derivative", [] {
    for (const auto& b : built_fixtures()) {
      const auto& p = b.fp.polytope;
      for (const auto& xi : random_in_ball(5, p.dim(), 2.0, 11)) {
        auto e = polytope_exp_integrals(p, xi);
        for (Eigen::Index k = 0; k < xi.size(); ++k) {
          Eigen::VectorXd hp = xi, hm = xi;
          hp[k] += 1e-5;
          hm[k] -= 1e-5;
          const double fd = (polytope_exp_integrals(p, hp).I0 - polytope_exp_integrals(p, hm).I0) / 2e-5;
          if (std::fabs(fd - e.I1[k]) > 1e-6 * std::max(1.0, std::fabs(e.I1[k])))
            return b.fixture.name + ": dI0/dxi = " + fmt(fd) + " vs I1 = " + fmt(e.I1[k]);
        }
      }
    }
    return std::string();
  });
  add("quadrature", "second_moment_spd", [] {
    for (const auto& b : built_fixtures())
      for (const auto& xi : random_in_ball(5, b.fp.polytope.dim(), 2.0, 12)) {
        auto e = polytope_exp_integrals(b.fp.polytope, xi);
        if ((e.I2 - e.I2.transpose()).norm() > 1e-12 * e.I2.norm()) return b.fixture.name + ": I2 not symmetric";
        if (e.I2.llt().info() != Eigen::Success) return b.fixture.name + ": I2 not positive definite";
      }
    return std::string();
  });
  add("quadrature", "simplex_subdivision", [] {
    for (const auto& b : built_fixtures())
      for (const auto& xi : random_in_ball(3, b.fp.polytope.dim(), 2.0, 13))
        for (const auto& s : b.fp.polytope.simplices()) {
          RationalVector mid(s.vertices[0].size());
          for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (s.vertices[0][i] + s.vertices[1][i]) / 2;
          Simplex a = s, c = s;
          a.vertices[1] = mid;
          c.vertices[0] = mid;
          auto whole = simplex_exp_integrals(s, xi);
          auto pa = simplex_exp_integrals(a, xi), pc = simplex_exp_integrals(c, xi);
          if (std::fabs(pa.I0 + pc.I0 - whole.I0) > 1e-12 * whole.I0) return b.fixture.name + ": I0 not additive";
          if ((pa.I1 + pc.I1 - whole.I1).norm() > 1e-12 * std::max(1.0, whole.I1.norm()))
            return b.fixture.name + ": I1 not additive";
        }
    return std::string();
  });
  add("quadrature", "grid_matches_volume", [] {
    for (const char* name : {"cp2", "dp1"}) {
      const auto& b = built(name);
      auto r = adaptive_grid_integral(
          [&](const Eigen::VectorXd& x) { return std::exp(log_det_hessian(*b.model, x).log_det); }, 2);
      const double vol = exact_moments(b.fp.polytope).volume.convert_to<double>();
      if (std::fabs(r.value - vol) > 1e-8) return std::string(name) + ": int det Hess = " + fmt(r.value);
    }
    return std::string();
  });
  add("quadrature", "gaussian", [] {
    auto r = adaptive_grid_integral([](const Eigen::VectorXd& x) { return std::exp(-x.squaredNorm()); }, 2);
    if (std::fabs(r.value - M_PI) > 1e-10) return "got " + fmt(r.value);
    return std::string();
  });

  // ---- potentials
  add("potentials", "gradient_and_hessian_check", [] {
    const double h = 1e-5;
    for (const auto& b : built_fixtures()) {
      const auto& m = *b.model;
      for (const auto& x : random_points(100, m.dim(), 5.0, 21)) {
        auto pv = evaluate_potential(m, x);
        for (Eigen::Index k = 0; k < x.size(); ++k) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
          e[k] = h;
          const double fd = (potential_value(m, x + e) - potential_value(m, x - e)) / (2 * h);
          if (std::fabs(fd - pv.grad[k]) > 1e-6) return b.fixture.name + ": gradient mismatch";
          Eigen::VectorXd col = (evaluate_potential(m, x + e).grad - evaluate_potential(m, x - e).grad) / (2 * h);
          if ((col - pv.hess.col(k)).norm() > 1e-6) return b.fixture.name + ": Hessian mismatch";
        }
      }
    }
    return std::string();
  });
  add("potentials", "moment_image_interior", [] {
    for (const auto& b : built_fixtures())
      // Beyond |x| ~ 15 the facet gaps drop below double resolution.
      for (const auto& x : random_points(200, b.model->dim(), 12.0, 22)) {
        auto g = evaluate_potential(*b.model, x).grad;
        for (const auto& r : b.fp.fan.rays)
          if (!(g.dot(r.to_eigen()) < 1.0)) return b.fixture.name + ": moment image on the boundary";
      }
    return std::string();
  });
  add("potentials", "convexity", [] {
    for (const auto& b : built_fixtures())
      for (const auto& x : random_points(200, b.model->dim(), 10.0, 23))
        if (evaluate_potential(*b.model, x).hess.llt().info() != Eigen::Success)
          return b.fixture.name + ": Hessian not positive definite";
    return std::string();
  });
  add("potentials", "ma_density_bounded", [] {
    const auto& b = built("dp1");
    double lo = INFINITY, hi = 0;
    for (double x1 = -30; x1 <= 30; x1 += 0.5)
      for (double x2 = -30; x2 <= 30; x2 += 0.5) {
        auto d = ma_density(*b.model, Eigen::Vector2d(x1, x2)).density;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    if (!(lo > 0) || !std::isfinite(hi)) return "density range [" + fmt(lo) + ", " + fmt(hi) + "]";
    return std::string();
  });
  add("potentials", "gap_identity", [] {
    for (const auto& b : built_fixtures())
      for (const auto& x : random_points(50, b.model->dim(), 20.0, 24)) {
        auto ld = log_det_hessian(*b.model, x);
        auto d = ma_density(*b.model, x);
        if (std::fabs(d.gap + ld.u + ld.log_det) > 1e-12 * std::max(1.0, std::fabs(ld.u)))
          return b.fixture.name + ": gap identity off";
      }
    return std::string();
  });
  add("potentials", "sup_normalization", [] {
    const auto& b = built("dp2");
    auto sol = solve_soliton_vector(b.fp.polytope);
    for (double t : {5.0, 10.0, 20.0}) {
      const double s = flow_grid_sup(flow_potential(*b.model, sol.xi_s, t));
      if (s > 1e-9 || s < -1e-3) return "t = " + fmt(t) + ": sup " + fmt(s);
    }
    return std::string();
  });
  add("potentials", "moment_limits_dp2", [] {
    const auto& b = built("dp2");
    auto up = evaluate_potential(*b.model, Eigen::Vector2d(0, 40)).grad;
    auto dn = evaluate_potential(*b.model, Eigen::Vector2d(0, -40)).grad;
    if ((up - Eigen::Vector2d(-0.5, 1)).norm() > 1e-6 || (dn - Eigen::Vector2d(0, -1)).norm() > 1e-6)
      return "limits " + fmt(up[0]) + "," + fmt(up[1]) + " / " + fmt(dn[0]) + "," + fmt(dn[1]);
    return std::string();
  });
  add("potentials", "moment_inverse_roundtrip", [] {
    for (const auto& b : built_fixtures())
      for (const auto& x0 : random_in_ball(20, b.model->dim(), 10.0, 25)) {
        auto x = invert_moment(*b.model, evaluate_potential(*b.model, x0).grad);
        if ((x - x0).norm() > 1e-8) return b.fixture.name + ": roundtrip error " + fmt((x - x0).norm());
      }
    return std::string();
  });

  // ---- invariants
  add("invariants", "futaki_linearity", [] {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> d(-9, 9);
    for (const auto& b : built_fixtures())
      for (int rep = 0; rep < 10; ++rep) {
        RationalVector x{Rational(d(rng), 7), Rational(d(rng), 3)}, y{Rational(d(rng), 5), Rational(d(rng), 2)};
        Rational a(d(rng), 11), c(d(rng), 13);
        RationalVector comb{a * x[0] + c * y[0], a * x[1] + c * y[1]};
        const auto& p = b.fp.polytope;
        if (futaki(p, comb) != a * futaki(p, x) + c * futaki(p, y)) return b.fixture.name + ": not linear";
      }
    return std::string();
  });
  add("invariants", "weyl_equivariance", [] {
    for (const auto& b : built_fixtures()) {
      const auto& p = b.fp.polytope;
      auto sol = solve_soliton_vector(p);
      for (const auto& g : weyl_group(p)) {
        for (const auto& xi : std::vector<LatticeVector>{{1, 0}, {0, 1}, {2, -3}})
          if (futaki(p, g.apply_dual(xi)) != futaki(p, xi)) return b.fixture.name + ": F not invariant";
        if ((g.apply_dual(sol.xi_s) - sol.xi_s).norm() > 1e-10) return b.fixture.name + ": xi_s not invariant";
      }
    }
    return std::string();
  });
  add("invariants", "soliton_optimality", [] {
    for (const auto& b : built_fixtures()) {
      auto sol = solve_soliton_vector(b.fp.polytope);
      auto e = polytope_exp_integrals(b.fp.polytope, sol.xi_s);
      if (e.I1.norm() > 1e-10 * e.I0) return b.fixture.name + ": weighted barycenter " + fmt(e.I1.norm() / e.I0);
      if (sol.covariance.llt().info() != Eigen::Success) return b.fixture.name + ": covariance not PD";
    }
    return std::string();
  });
  add("invariants", "threshold_monotone", [] {
    double prev = -1;
    for (double b : {0.0, 1.0, 3.0, 10.0}) {
      const double t = nadel_threshold(2, b);
      if (!(t > prev)) return std::string("not increasing");
      prev = t;
    }
    if (!(1.0 - nadel_threshold(2, 1e9) < 1e-8)) return std::string("no limit 1");
    return std::string();
  });
  add("invariants", "route_agreement", [] {
    for (const char* name : {"dp1", "dp2"}) {
      const auto& b = built(name);
      const auto& p = b.fp.polytope;
      for (double c : {0.0, 0.3, -0.3}) {
        Eigen::Vector2d xi(c, c);
        auto direct = tian_zhu_direct(*b.model, p, xi);
        std::vector<double> ratios;
        for (Eigen::Vector2d eta : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1),
                                    Eigen::Vector2d(1, -1)}) {
          const double poly = tian_zhu_polytope(p, xi, eta);
          if (std::fabs(poly) < 1e-8) {
            if (std::fabs(direct(eta)) > 1e-8) return std::string(name) + ": shared zero broken";
            continue;
          }
          ratios.push_back(direct(eta) / poly);
        }
        for (double r : ratios)
          if (!(r > 0) || std::fabs(r - ratios.front()) > 1e-4 * ratios.front())
            return std::string(name) + ": ratio " + fmt(r) + " vs " + fmt(ratios.front());
      }
      auto sol = solve_soliton_vector(p);
      auto direct = tian_zhu_direct(*b.model, p, sol.xi_s);
      for (Eigen::Vector2d eta : {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)})
        if (std::fabs(direct(eta)) > 1e-6 || std::fabs(tian_zhu_polytope(p, sol.xi_s, eta)) > 1e-6)
          return std::string(name) + ": invariants do not vanish at xi_s";
    }
    return std::string();
  });
  add("invariants", "functional_ordering", [] {
    for (const char* name : {"dp1", "dp2"}) {
      const auto& b = built(name);
      const auto& p = b.fp.polytope;
      auto sol = solve_soliton_vector(p);
      for (const Eigen::VectorXd& xi : {Eigen::VectorXd(Eigen::Vector2d::Zero()), sol.xi_s}) {
        auto range = support_range(p, xi);
        const double bconst = range.max - range.min;
        for (const Eigen::Vector2d& a : {Eigen::Vector2d(1, 1), Eigen::Vector2d(-1, 2)}) {
          GridOptions grid;
          grid.radius = 25.0;  // the integrand decays like e^{-|x|}
          grid.rel_tol = 1e-8;
          auto ij = functionals_IJ(*b.model, p, xi, translation_potential(*b.model, a), grid);
          if (!(ij.J >= 0 && ij.J <= ij.I && ij.J >= ij.I / (3.0 + bconst)))
            return std::string(name) + ": I = " + fmt(ij.I) + ", J = " + fmt(ij.J) + ", b = " + fmt(bconst);
        }
      }
    }
    return std::string();
  });

  // ---- mis
  add("mis", "certificate_soundness", [] {
    for (const auto& b : built_fixtures()) {
      FaceContext ctx(b.fp);
      CandidateOptions opt;
      opt.enumerate = true;
      for (auto& c : enumerate_candidates(ctx, b.fixture, opt))
        for (auto mode : {AnalysisMode::KE, AnalysisMode::KRS}) {
          auto cert = mode == AnalysisMode::KE ? ke_obstruction_search(ctx, c) : krs_obstruction_search(ctx, c);
          if (cert && !verify_certificate(ctx, c, *cert)) return b.fixture.name + ": bad certificate for " + c.label;
        }
    }
    return std::string();
  });
  add("mis", "weyl_consistency", [] {
    for (const auto& b : built_fixtures()) {
      FaceContext ctx(b.fp);
      CandidateOptions opt;
      opt.enumerate = true;
      // Single faces are not W-invariant in general, which is the point here.
      for (std::size_t f = 0; f < ctx.faces.size(); ++f) {
        auto c = make_candidate(ctx, {f});
        for (auto mode : {AnalysisMode::KE, AnalysisMode::KRS}) {
          auto cert = mode == AnalysisMode::KE ? ke_obstruction_search(ctx, c) : krs_obstruction_search(ctx, c);
          if (!cert) continue;
          for (std::size_t g = 0; g < ctx.weyl.size(); ++g) {
            auto gc = make_candidate(ctx, {ctx.face_image[g][f]});
            auto moved = *cert;
            moved.vector = ctx.weyl[g].apply_dual(cert->vector);
            if (!verify_certificate(ctx, gc, moved)) return b.fixture.name + ": image certificate fails";
          }
        }
      }
    }
    return std::string();
  });
  add("mis", "d_le0_monotone", [] {
    for (const auto& b : built_fixtures()) {
      FaceContext ctx(b.fp);
      CandidateOptions opt;
      opt.enumerate = true;
      auto cands = enumerate_candidates(ctx, b.fixture, opt);
      for (int x = -2; x <= 2; ++x)
        for (int y = -2; y <= 2; ++y) {
          RationalVector xi{Rational(x), Rational(y)};
          for (const auto& big : cands) {
            if (!d_le0_contains(ctx, big, xi)) continue;
            for (auto f : big.faces) {
              auto small = make_candidate(ctx, {f});
              if (!d_le0_contains(ctx, small, xi)) return b.fixture.name + ": containment not monotone";
            }
          }
        }
    }
    return std::string();
  });
  add("mis", "krs_scaling", [] {
    for (const auto& b : built_fixtures()) {
      FaceContext ctx(b.fp);
      for (std::size_t f = 0; f < ctx.faces.size(); ++f) {
        auto c = make_candidate(ctx, {f});
        auto cert = krs_obstruction_search(ctx, c);
        if (!cert) continue;
        for (Rational lambda : {Rational(1, 2), Rational(3), Rational(7, 5)}) {
          RationalVector eta = to_rational(cert->vector);
          for (auto& e : eta) e *= lambda;
          if (!z_plus_contains(ctx, c, eta)) return b.fixture.name + ": scaled eta fails";
        }
      }
    }
    return std::string();
  });

  // ---- flow
  add("flow", "z2_equivariance", [] {
    const auto& b = built("dp2");
    auto sol = solve_soliton_vector(b.fp.polytope);
    auto r1 = facet_region(b.fp.fan, {0, 1});
    auto r2 = facet_region(b.fp.fan, {1, 0});
    for (double t : {20.0, 60.0}) {
      const double a = alpha_log_integral(*b.model, sol.xi_s, 0.8, t, r1).log_value;
      const double c = alpha_log_integral(*b.model, sol.xi_s, 0.8, t, r2).log_value;
      if (std::fabs(a - c) > 1e-6) return "t = " + fmt(t) + ": " + fmt(a) + " vs " + fmt(c);
    }
    return std::string();
  });
  add("flow", "slope_increases_with_alpha", [] {
    for (const char* name : {"dp1", "dp2"}) {
      auto rep = flow_mis_report(find_fixture(name));
      for (const auto& ff : rep.facets) {
        if (ff.classes.front().kind != Growth::Divergent) continue;
        for (std::size_t a = 1; a < ff.classes.size(); ++a)
          if (!(ff.classes[a].slope > ff.classes[a - 1].slope)) return std::string(name) + ": " + ff.face_id;
      }
      for (const auto& ff : rep.facets)
        if (!ff.bound_respected) return std::string(name) + ": " + ff.face_id + " exceeds e^{-(1-alpha)u} bound";
    }
    return std::string();
  });
  return props;
}

inline bool property_selected(const Property& p, const std::string& filter) {
  if (filter.empty()) return true;
  return p.group == filter || p.name == filter || (p.group + "." + p.name) == filter;
}

inline std::vector<PropertyResult> run_selftest(const std::string& filter = "") {
  std::vector<PropertyResult> out;
  for (const auto& p : property_suite()) {
    if (!property_selected(p, filter)) continue;
    PropertyResult r{p.group, p.name, false, "", 0.0};
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = p.check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("threw ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace torickems
