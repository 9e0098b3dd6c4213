#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "torickems/invariants.hpp"
#include "torickems/potentials.hpp"
#include "torickems/quadrature.hpp"

using namespace torickems;

namespace {

struct Built {
  FanoPolytope fp;
  PotentialModel model;
  explicit Built(const std::string& name) : fp(build_polytope(find_fixture(name).rays)), model(fp) {}
};

}  // namespace

TEST(Quadrature, DividedDifferenceAgreesWithDefinition) {
  // well separated nodes: the recurrence itself is accurate
  std::vector<double> x{-1.3, 0.4, 2.2};
  const double d01 = (std::exp(x[1]) - std::exp(x[0])) / (x[1] - x[0]);
  const double d12 = (std::exp(x[2]) - std::exp(x[1])) / (x[2] - x[1]);
  EXPECT_NEAR(exp_divided_difference(x), (d12 - d01) / (x[2] - x[0]), 1e-14);
  // confluent limit e^x / k!
  EXPECT_NEAR(exp_divided_difference({0.7, 0.7, 0.7}), std::exp(0.7) / 2.0, 1e-15);
  // the near-confluent regime agrees with the confluent limit
  EXPECT_NEAR(exp_divided_difference({0.7, 0.7 + 1e-9, 0.7 - 1e-9}), std::exp(0.7) / 2.0, 1e-12);
}

TEST(Quadrature, ExpMomentsMatchTriangleGauss) {
  for (const auto& name : fixture_names()) {
    auto p = build_polytope(find_fixture(name).rays).polytope;
    for (const oracle::D2& xi : {oracle::D2{0, 0}, oracle::D2{0.8, -0.3}, oracle::D2{-1.7, 2.1}}) {
      auto ref = oracle::exp_moments(oracle_rays(name), xi);
      auto got = polytope_exp_integrals(p, Eigen::Vector2d(xi[0], xi[1]));
      EXPECT_NEAR(got.I0, ref.m0, 1e-12 * ref.m0) << name;
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(got.I1[k], ref.m1[k], 1e-12 * ref.m0) << name;
        for (int l = 0; l < 2; ++l) EXPECT_NEAR(got.I2(k, l), ref.m2[k][l], 1e-12 * ref.m0) << name;
      }
    }
  }
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  auto rule = gauss_legendre(32);
  double s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 40);
  EXPECT_NEAR(s, 1.0 / 41.0, 1e-15);
}

TEST(Quadrature, GridGaussian) {
  auto r = adaptive_grid_integral([](const Eigen::VectorXd& x) { return std::exp(-x.squaredNorm()); }, 2);
  EXPECT_NEAR(r.value, M_PI, 1e-10);
}

TEST(Quadrature, GridReportsNoConvergence) {
  GridOptions opt;
  opt.max_levels = 2;
  opt.rel_tol = 1e-15;
  // a kink keeps the trapezoid error at O(h^2)
  EXPECT_THROW(adaptive_grid_integral([](const Eigen::VectorXd& x) { return std::exp(-x.lpNorm<1>()); }, 2, opt),
               Error);
}

TEST(Quadrature, SignedLogArithmetic) {
  auto a = SignedLog::from_value(3.0), b = SignedLog::from_value(-5.0);
  EXPECT_NEAR((a + b).value(), -2.0, 1e-15);
  EXPECT_NEAR((a - b).value(), 8.0, 1e-14);
  EXPECT_NEAR(SignedLog::from_log(800.0).scaled_log(-799.0).value(), std::exp(1.0), 1e-12);
}

TEST(Potentials, DetHessianIntegratesToVolume) {
  // int det Hess u~ dx = vol(Delta) by change of variables through the moment map
  Built s("cp2");
  auto r = adaptive_grid_integral(
      [&](const Eigen::VectorXd& x) { return std::exp(log_det_hessian(s.model, x).log_det); }, 2);
  EXPECT_NEAR(r.value, 4.5, 1e-8);
}

TEST(Potentials, MomentLimitsOnDp2) {
  // limits are the averages of the lattice points on the face maximizing <m, x>
  Built s("dp2");
  auto up = evaluate_potential(s.model, Eigen::Vector2d(0, 40)).grad;
  auto dn = evaluate_potential(s.model, Eigen::Vector2d(0, -40)).grad;
  EXPECT_NEAR((up - Eigen::Vector2d(-0.5, 1.0)).norm(), 0.0, 1e-6);
  EXPECT_NEAR((dn - Eigen::Vector2d(0.0, -1.0)).norm(), 0.0, 1e-6);
}

TEST(Potentials, MatchesLogSumExpOverLatticePoints) {
  for (const auto& name : fixture_names()) {
    Built s(name);
    auto pts = oracle::lattice_points(oracle_rays(name));
    for (const Eigen::Vector2d x : {Eigen::Vector2d(0.3, -1.1), Eigen::Vector2d(-2.0, 0.5)}) {
      double sum = 0;
      for (const auto& m : pts) sum += std::exp(m[0] * x[0] + m[1] * x[1]);
      // u~ is normalized up to an additive constant; compare differences
      const double lib = potential_value(s.model, x) - potential_value(s.model, Eigen::Vector2d::Zero());
      EXPECT_NEAR(lib, std::log(sum) - std::log(static_cast<double>(pts.size())), 1e-12) << name;
    }
  }
}

TEST(Potentials, InvertMomentBoundary) {
  Built s("dp1");
  try {
    invert_moment(s.model, Eigen::Vector2d(0, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryPoint);
  }
}

TEST(Potentials, FlowPotentialSupIsZero) {
  Built s("dp2");
  auto sol = solve_soliton_vector(s.fp.polytope);
  for (double t : {5.0, 10.0, 20.0}) {
    const double sup = flow_grid_sup(flow_potential(s.model, sol.xi_s, t));
    EXPECT_LE(sup, 1e-9);
    EXPECT_GE(sup, -1e-3);
  }
}

TEST(Invariants, FutakiExact) {
  auto dp1 = build_polytope(find_fixture("dp1").rays).polytope;
  auto dp2 = build_polytope(find_fixture("dp2").rays).polytope;
  // -n! vol <bary, xi>
  EXPECT_EQ(futaki(dp1, LatticeVector{-1, -1}), Rational(-2) * Rational(4) * Rational(-2, 12));
  EXPECT_GT(futaki(dp1, LatticeVector{-1, -1}), 0);
  EXPECT_EQ(futaki(dp2, LatticeVector{1, 1}), Rational(-2) * Rational(7, 2) * Rational(-4, 21));
  EXPECT_GT(futaki(dp2, LatticeVector{1, 1}), 0);
  for (const char* name : {"cp2", "p1xp1", "dp3"}) {
    auto p = build_polytope(find_fixture(name).rays).polytope;
    EXPECT_EQ(futaki(p, LatticeVector{1, 0}), 0);
    EXPECT_EQ(futaki(p, LatticeVector{0, 1}), 0);
  }
}

TEST(Invariants, SolitonMatchesBisection) {
  for (const char* name : {"dp1", "dp2"}) {
    auto p = build_polytope(find_fixture(name).rays).polytope;
    auto sol = solve_soliton_vector(p);
    const double c = oracle::diagonal_soliton(oracle_rays(name));
    EXPECT_NEAR(sol.xi_s[0], c, 1e-9) << name;
    EXPECT_NEAR(sol.xi_s[1], c, 1e-9) << name;
    EXPECT_LE(sol.grad_norm, 1e-10);
  }
}

TEST(Invariants, SolitonThreshold) {
  auto p = build_polytope(find_fixture("dp2").rays).polytope;
  auto sol = solve_soliton_vector(p);
  const double beta = sol.xi_s[0];
  EXPECT_GT(beta, 0);
  EXPECT_NEAR(sol.b, 3 * beta, 1e-12);
  EXPECT_NEAR(sol.threshold, (2 + sol.b) / (3 + sol.b), 1e-15);
  EXPECT_NEAR(nadel_threshold(2, 0.0), 2.0 / 3.0, 1e-15);
}

TEST(Invariants, SolitonZeroForSymmetricFixtures) {
  for (const char* name : {"cp2", "p1xp1", "dp3"}) {
    auto sol = solve_soliton_vector(build_polytope(find_fixture(name).rays).polytope);
    EXPECT_LE(sol.xi_s.norm(), 1e-12) << name;
  }
}

TEST(Invariants, TianZhuPolytopeAtZeroIsFutakiMultiple) {
  auto p = build_polytope(find_fixture("dp1").rays).polytope;
  const Eigen::Vector2d eta(1, 2);
  const double f = futaki(p, Eigen::VectorXd(eta));
  const double tz = tian_zhu_polytope(p, Eigen::Vector2d::Zero(), eta);
  ASSERT_NE(f, 0.0);
  EXPECT_GT(tz / f, 0.0);
}

TEST(Invariants, ConstantPotentialHasZeroFunctionals) {
  Built s("dp1");
  GridOptions grid;
  grid.radius = 25.0;
  grid.rel_tol = 1e-8;
  auto ij = functionals_IJ(s.model, s.fp.polytope, Eigen::Vector2d::Zero(), constant_potential(0.7), grid);
  EXPECT_NEAR(ij.I, 0.0, 1e-12);
  EXPECT_NEAR(ij.J, 0.0, 1e-12);
}

TEST(Invariants, NonKaehlerPotentialRejected) {
  Built s("dp1");
  try {
    check_kaehler(s.model, bump_potential(50.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotKaehler);
  }
}
