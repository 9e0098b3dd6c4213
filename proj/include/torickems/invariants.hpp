#pragma once

// Futaki and Tian-Zhu invariants, the soliton vector field, and the
// functionals I and J on torus-invariant potentials.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/potentials.hpp"
#include "torickems/quadrature.hpp"

namespace torickems {

namespace detail {
inline Integer integer_factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}
}  // namespace detail

/// F(xi) = -n! vol(Delta) <bary, xi>; positive on dP1 at (-1,-1) and on dP2 at (1,1).
inline Rational futaki(const ReflexivePolytope& p, const RationalVector& xi) {
  auto m = exact_moments(p);
  return -Rational(detail::integer_factorial(p.dim())) * m.volume * dot(m.barycenter, xi);
}

inline Rational futaki(const ReflexivePolytope& p, const LatticeVector& xi) { return futaki(p, to_rational(xi)); }

inline double futaki(const ReflexivePolytope& p, const Eigen::VectorXd& xi) {
  auto m = exact_moments(p);
  return -detail::factorial(p.dim()) * m.volume.convert_to<double>() * to_eigen(m.barycenter).dot(xi);
}

/// Soliton-weighted invariant via moments: -n! (vol / I0(xi)) <I1(xi), eta>.
inline double tian_zhu_polytope(const ReflexivePolytope& p, const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) {
  auto e = polytope_exp_integrals(p, xi);
  const double vol = exact_moments(p).volume.convert_to<double>();
  return -detail::factorial(p.dim()) * (vol / e.I0) * e.I1.dot(eta);
}

struct TianZhuDirect {
  /// G with F_xi(eta) = <G, eta>.
  Eigen::VectorXd covector;
  std::vector<QuadratureResult> quadrature;

  double operator()(const Eigen::VectorXd& eta) const { return covector.dot(eta); }
};

/// int <grad(h~ - theta~), eta> e^{theta~} det Hess u~ dx over R^n, where
/// grad h~ = -grad u~ - grad log det Hess u~ and grad theta~ = Hess u~ xi.
inline TianZhuDirect tian_zhu_direct(const PotentialModel& model, const ReflexivePolytope& p,
                                     const Eigen::VectorXd& xi, GridOptions opt = {}) {
  const std::size_t n = model.dim();
  const auto theta = theta_normalized(p, xi);
  if (opt.abs_tol == 0.0) opt.abs_tol = 1e-10 * exact_moments(p).volume.convert_to<double>();
  LogField f = [&](const Eigen::VectorXd& x, std::span<SignedLog> out) {
    auto ld = log_det_hessian(model, x);
    auto pv = evaluate_potential(model, x);
    Eigen::VectorXd g = -ld.grad_u - ld.grad_log_det - pv.hess * xi;
    const double log_weight = theta(ld.grad_u) + ld.log_det;
    for (std::size_t k = 0; k < n; ++k)
      out[k] = SignedLog::from_value(g[static_cast<Eigen::Index>(k)]).scaled_log(log_weight);
  };
  TianZhuDirect out;
  out.quadrature = adaptive_grid_integral(f, n, n, opt);
  out.covector.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) out.covector[static_cast<Eigen::Index>(k)] = out.quadrature[k].value;
  return out;
}

inline double tian_zhu_direct(const PotentialModel& model, const ReflexivePolytope& p, const Eigen::VectorXd& xi,
                              const Eigen::VectorXd& eta, const GridOptions& opt = {}) {
  if (eta.isZero()) return 0.0;
  return tian_zhu_direct(model, p, xi, opt)(eta);
}

/// Nadel exponent threshold (n + b) / (n + 1 + b).
inline double nadel_threshold(std::size_t n, double b) {
  const auto dn = static_cast<double>(n);
  return (dn + b) / (dn + 1.0 + b);
}

struct SolitonResult {
  Eigen::VectorXd xi_s;
  double grad_norm = 0.0;
  int iterations = 0;
  double b = 0.0;
  double alpha_v = 0.0;
  double beta_v = 0.0;
  double threshold = 0.0;
  Eigen::MatrixXd covariance;  // Hessian of log I0 at xi_s
};

/// Minimizes the strictly convex xi -> log int_Delta e^<xi,y> dy by Newton with
/// backtracking. The gradient is the weighted barycenter I1/I0.
inline SolitonResult solve_soliton_vector(const ReflexivePolytope& p, double tol = 1e-12) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
  SolitonResult out;
  auto eval = [&](const Eigen::VectorXd& z, Eigen::VectorXd* g, Eigen::MatrixXd* h) {
    auto e = polytope_exp_integrals(p, z);
    Eigen::VectorXd mean = e.I1 / e.I0;
    if (g) *g = mean;
    if (h) *h = e.I2 / e.I0 - mean * mean.transpose();
    return std::log(e.I0);
  };
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  double f = eval(xi, &g, &h);
  int it = 0;
  for (; it < 100 && g.norm() > tol; ++it) {
    Eigen::VectorXd d = h.llt().solve(-g);
    double step = 1.0;
    const double slope = g.dot(d);
    Eigen::VectorXd trial = xi + d;
    double ft = eval(trial, nullptr, nullptr);
    while (step > 1e-10 && ft > f + 1e-4 * step * slope + 1e-15 * std::fabs(f)) {
      step *= 0.5;
      trial = xi + step * d;
      ft = eval(trial, nullptr, nullptr);
    }
    xi = trial;
    f = eval(xi, &g, &h);
  }
  if (g.norm() > tol) {
    std::ostringstream msg;
    msg << "soliton Newton stopped at |grad| = " << g.norm() << " after " << it << " steps";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  out.xi_s = xi;
  out.grad_norm = g.norm();
  out.iterations = it;
  out.covariance = h;
  auto theta = theta_normalized(p, xi);
  out.alpha_v = theta.alpha;
  out.beta_v = theta.beta;
  out.b = theta.beta - theta.alpha;
  out.threshold = nadel_threshold(p.dim(), out.b);
  return out;
}

// ---------------------------------------------------------------------------
// Functionals I and J

/// Torus-invariant potential psi~ on R^n with derivatives.
struct TestPotential {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hess;
};

/// psi~(x) = u~(x - a) - u~(x).
inline TestPotential translation_potential(const PotentialModel& model, const Eigen::VectorXd& a) {
  std::ostringstream name;
  name << "translation(" << a.transpose() << ")";
  const PotentialModel* m = &model;
  return {name.str(),
          [m, a](const Eigen::VectorXd& x) { return potential_value(*m, x - a) - potential_value(*m, x); },
          [m, a](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return evaluate_potential(*m, x - a).grad - evaluate_potential(*m, x).grad;
          },
          [m, a](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            return evaluate_potential(*m, x - a).hess - evaluate_potential(*m, x).hess;
          }};
}

/// psi~(x) = eps e^{-|x|^2}.
inline TestPotential bump_potential(double eps) {
  std::ostringstream name;
  name << "bump(" << eps << ")";
  return {name.str(), [eps](const Eigen::VectorXd& x) { return eps * std::exp(-x.squaredNorm()); },
          [eps](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -2.0 * eps * std::exp(-x.squaredNorm()) * x; },
          [eps](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            const auto n = x.size();
            return eps * std::exp(-x.squaredNorm()) *
                   (4.0 * x * x.transpose() - 2.0 * Eigen::MatrixXd::Identity(n, n));
          }};
}

inline TestPotential constant_potential(double c) {
  std::ostringstream name;
  name << "constant(" << c << ")";
  return {name.str(), [c](const Eigen::VectorXd&) { return c; },
          [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); },
          [](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(x.size(), x.size()); }};
}

/// Grid check that u~ + psi~ is strictly convex with moment image inside Delta.
inline void check_kaehler(const PotentialModel& model, const TestPotential& psi, double radius = 12.0,
                          double step = 0.25) {
  const std::size_t n = model.dim();
  const auto per_axis = static_cast<std::size_t>(std::llround(2 * radius / step)) + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      x[static_cast<Eigen::Index>(i)] = -radius + step * static_cast<double>(rem % per_axis);
      rem /= per_axis;
    }
    auto pv = evaluate_potential(model, x);
    Eigen::MatrixXd h = pv.hess + psi.hess(x);
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    const bool pd = llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0;
    const double margin = boundary_margin(model.rays(), pv.grad + psi.grad(x));
    if (!pd || margin <= 0.0) {
      std::ostringstream msg;
      msg << psi.name << ": u~ + psi~ fails " << (pd ? "the moment-image check" : "convexity") << " at x = ("
          << x.transpose() << ")";
      throw Error(ErrorKind::NotKaehler, msg.str());
    }
  }
}

struct FunctionalsIJ {
  double I = 0.0;
  double J = 0.0;
  QuadratureResult I_quad, J_quad;
};

/// I = (1/V) int psi [e^{theta~} det H - e^{theta~_1} det(H + Hess psi)] dx and
/// J = int_0^1 of the same with psi_t = t psi, by a 32-point Gauss rule in t.
inline FunctionalsIJ functionals_IJ(const PotentialModel& model, const ReflexivePolytope& p, const Eigen::VectorXd& xi,
                                    const TestPotential& psi, GridOptions opt = {}) {
  check_kaehler(model, psi);
  const double vol = exact_moments(p).volume.convert_to<double>();
  const auto theta = theta_normalized(p, xi);
  static const GaussRule rule = gauss_legendre(32);
  if (opt.abs_tol == 0.0) opt.abs_tol = 1e-11;
  LogField f = [&](const Eigen::VectorXd& x, std::span<SignedLog> out) {
    auto pv = evaluate_potential(model, x);
    const double ps = psi.value(x);
    if (ps == 0.0) return;
    const Eigen::VectorXd gp = psi.grad(x);
    const Eigen::MatrixXd hp = psi.hess(x);
    auto weight = [&](double t) {
      return std::exp(theta(pv.grad + t * gp)) * (pv.hess + t * hp).determinant();
    };
    const double w0 = weight(0.0);
    double path = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) path += rule.weights[k] * weight(rule.nodes[k]);
    out[0] = SignedLog::from_value(ps * (w0 - weight(1.0)) / vol);
    out[1] = SignedLog::from_value(ps * (w0 - path) / vol);
  };
  auto res = adaptive_grid_integral(f, 2, model.dim(), opt);
  return {res[0].value, res[1].value, res[0], res[1]};
}

}  // namespace torickems
