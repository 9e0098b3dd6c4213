#pragma once

// The canonical potential u~(x) = log sum_i e^<v_i,x> over L(Delta), its
// moment map and Hessian, and the potentials derived from it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/quadrature.hpp"

namespace torickems {

class PotentialModel {
 public:
  PotentialModel(const std::vector<LatticeVector>& points, const std::vector<LatticeVector>& rays)
      : n_(points.front().size()), rays_(rays) {
    points_.resize(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = 0; j < n_; ++j)
        points_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(points[i][j]);
    // (n+1)-subsets with nonzero det[1 v_i], for the Cauchy-Binet form of det Hess.
    detail::for_each_subset(points.size(), n_ + 1, [&](const std::vector<std::size_t>& pick) {
      RationalMatrix m;
      for (auto i : pick) {
        RationalVector row{Rational(1)};
        for (auto c : points[i]) row.emplace_back(c);
        m.push_back(std::move(row));
      }
      Rational d = exact::determinant(m);
      if (d == 0) return;
      Subset s;
      s.ids = pick;
      s.log_d2 = 2.0 * std::log(std::fabs(d.convert_to<double>()));
      s.sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
      for (auto i : pick) s.sum += points_.row(static_cast<Eigen::Index>(i)).transpose();
      subsets_.push_back(std::move(s));
    });
    if (subsets_.empty()) throw Error(ErrorKind::InvalidInput, "lattice points do not affinely span");
  }

  explicit PotentialModel(const FanoPolytope& fp) : PotentialModel(fp.polytope.lattice_points(), fp.fan.rays) {}

  std::size_t dim() const noexcept { return n_; }
  /// Exponents v_i as rows.
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  const std::vector<LatticeVector>& rays() const noexcept { return rays_; }

  struct Subset {
    std::vector<std::size_t> ids;
    double log_d2 = 0.0;
    Eigen::VectorXd sum;
  };
  const std::vector<Subset>& subsets() const noexcept { return subsets_; }

 private:
  std::size_t n_;
  Eigen::MatrixXd points_;
  std::vector<LatticeVector> rays_;
  std::vector<Subset> subsets_;
};

struct PotentialValue {
  double u = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// u~, its gradient (the moment map) and Hessian via max-shifted softmax weights.
inline PotentialValue evaluate_potential(const PotentialModel& model, const Eigen::VectorXd& x) {
  Eigen::VectorXd a = model.points() * x;
  const double m = a.maxCoeff();
  Eigen::VectorXd w = (a.array() - m).exp();
  const double z = w.sum();
  Eigen::VectorXd p = w / z;
  PotentialValue out;
  out.u = m + std::log(z);
  out.grad = model.points().transpose() * p;
  // Covariance as sum_{i<j} p_i p_j (v_i - v_j)(v_i - v_j)^T: no cancellation far out.
  const auto n = static_cast<Eigen::Index>(model.dim());
  out.hess = Eigen::MatrixXd::Zero(n, n);
  const auto& v = model.points();
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.rows(); ++j) {
      Eigen::VectorXd d = (v.row(i) - v.row(j)).transpose();
      out.hess.noalias() += (p[i] * p[j]) * d * d.transpose();
    }
  return out;
}

inline double potential_value(const PotentialModel& model, const Eigen::VectorXd& x) {
  Eigen::VectorXd a = model.points() * x;
  const double m = a.maxCoeff();
  return m + std::log((a.array() - m).exp().sum());
}

struct LogDetHessian {
  double u = 0.0;
  Eigen::VectorXd grad_u;
  double log_det = 0.0;
  Eigen::VectorXd grad_log_det;
};

/// log det Hess u~ = LSE_S(sum_{i in S} a_i + log D_S^2) - (n+1) u~, which never
/// forms the tiny determinant directly. Also returns its gradient.
inline LogDetHessian log_det_hessian(const PotentialModel& model, const Eigen::VectorXd& x) {
  const auto n = static_cast<double>(model.dim());
  Eigen::VectorXd a = model.points() * x;
  const double m = a.maxCoeff();
  Eigen::VectorXd w = (a.array() - m).exp();
  const double z = w.sum();
  LogDetHessian out;
  out.u = m + std::log(z);
  out.grad_u = model.points().transpose() * (w / z);

  const auto& subs = model.subsets();
  std::vector<double> e(subs.size());
  double emax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < subs.size(); ++k) {
    double s = subs[k].log_d2;
    for (auto i : subs[k].ids) s += a[static_cast<Eigen::Index>(i)];
    e[k] = s;
    emax = std::max(emax, s);
  }
  double total = 0.0;
  out.grad_log_det = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dim()));
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const double q = std::exp(e[k] - emax);
    total += q;
    out.grad_log_det += q * subs[k].sum;
  }
  out.grad_log_det /= total;
  out.grad_log_det -= (n + 1.0) * out.grad_u;
  out.log_det = emax + std::log(total) - (n + 1.0) * out.u;
  return out;
}

struct MADensity {
  double density = 0.0;  // e^{u~} det Hess u~
  double gap = 0.0;      // -u~ - log det Hess u~, up to its additive constant
};

inline MADensity ma_density(const PotentialModel& model, const Eigen::VectorXd& x) {
  auto ld = log_det_hessian(model, x);
  if (ld.log_det < std::log(1e-300)) {
    std::ostringstream msg;
    msg << "det Hess u~ = exp(" << ld.log_det << ") at x = (" << x.transpose() << ")";
    throw Error(ErrorKind::HessianSingular, msg.str());
  }
  MADensity out;
  out.gap = -ld.u - ld.log_det;
  out.density = std::exp(ld.u + ld.log_det);
  return out;
}

/// Distance-like margin of y from the boundary: min over rays of 1 - <y, b>.
inline double boundary_margin(const std::vector<LatticeVector>& rays, const Eigen::VectorXd& y) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& b : rays) margin = std::min(margin, 1.0 - y.dot(b.to_eigen()));
  return margin;
}

/// Solves grad u~(x) = y by damped Newton on x -> u~(x) - <y, x>.
inline Eigen::VectorXd invert_moment(const PotentialModel& model, const Eigen::VectorXd& y, double tol = 1e-10) {
  const double margin = boundary_margin(model.rays(), y);
  if (margin < 1e-9) {
    std::ostringstream msg;
    msg << "y = (" << y.transpose() << ") has boundary margin " << margin;
    throw Error(ErrorKind::BoundaryPoint, msg.str());
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dim()));
  auto objective = [&](const Eigen::VectorXd& z) { return potential_value(model, z) - y.dot(z); };
  for (int it = 0; it < 200; ++it) {
    auto pv = evaluate_potential(model, x);
    Eigen::VectorXd g = pv.grad - y;
    Eigen::VectorXd d = pv.hess.ldlt().solve(-g);
    if (g.norm() <= tol) {
      // Residual small; a few full Newton steps pin x down where Hess u~ is tiny.
      for (int polish = 0; polish < 4 && d.norm() > 1e-14 * (1.0 + x.norm()); ++polish) {
        x += d;
        pv = evaluate_potential(model, x);
        d = pv.hess.ldlt().solve(y - pv.grad);
      }
      return x;
    }
    double f0 = objective(x), step = 1.0;
    const double slope = g.dot(d);
    while (step > 1e-12 && objective(x + step * d) > f0 + 1e-4 * step * slope) step *= 0.5;
    x += step * d;
  }
  auto pv = evaluate_potential(model, x);
  if ((pv.grad - y).norm() <= tol) return x;
  std::ostringstream msg;
  msg << "moment inversion stalled at residual " << (pv.grad - y).norm();
  throw Error(ErrorKind::NoConvergence, msg.str());
}

/// theta~(x) = <grad u~(x), xi> + c_norm, normalized so that
/// int e^{theta~} det Hess u~ dx = vol(Delta).
struct ThetaPotential {
  Eigen::VectorXd xi;
  double c_norm = 0.0;
  double alpha = 0.0;  // min of theta~
  double beta = 0.0;   // max of theta~

  double operator()(const Eigen::VectorXd& grad_u) const { return grad_u.dot(xi) + c_norm; }
};

inline ThetaPotential theta_normalized(const ReflexivePolytope& p, const Eigen::VectorXd& xi) {
  ThetaPotential th;
  th.xi = xi;
  const double vol = exact_moments(p).volume.convert_to<double>();
  th.c_norm = std::log(vol / polytope_exp_integrals(p, xi).I0);
  auto range = support_range(p, xi);
  th.alpha = range.min + th.c_norm;
  th.beta = range.max + th.c_norm;
  return th;
}

/// psi~_t(x) = u~(x - t xi) - u~(x) - c_t with c_t = -t min_{v in L} <v, xi>,
/// so that sup psi~_t = 0 (approached along the minimizing directions).
struct FlowPotential {
  const PotentialModel* model = nullptr;
  Eigen::VectorXd xi;
  double t = 0.0;
  double c_t = 0.0;

  double operator()(const Eigen::VectorXd& x) const {
    return potential_value(*model, x - t * xi) - potential_value(*model, x) - c_t;
  }
};

inline FlowPotential flow_potential(const PotentialModel& model, const Eigen::VectorXd& xi, double t) {
  if (t < 0) throw Error(ErrorKind::InvalidInput, "flow time must be nonnegative");
  FlowPotential fp{&model, xi, t, 0.0};
  fp.c_t = -t * (model.points() * xi).minCoeff();
  return fp;
}

/// Max of psi~_t over the square grid [-radius, radius]^2 (n = 2) or cube.
inline double flow_grid_sup(const FlowPotential& psi, double radius = 50.0, double step = 0.5) {
  const std::size_t n = psi.model->dim();
  const auto per_axis = static_cast<std::size_t>(std::llround(2 * radius / step)) + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      x[static_cast<Eigen::Index>(i)] = -radius + step * static_cast<double>(rem % per_axis);
      rem /= per_axis;
    }
    best = std::max(best, psi(x));
  }
  return best;
}

/// h = min of max_i <v_i, x> over the boundary of the unit cube, sampled. u~(x) >= h |x|_inf gives tails of e^{-lambda u~} outside
/// [-R, R]^n of order e^{-lambda h R}.
inline double support_growth_rate(const PotentialModel& model, std::size_t samples_per_edge = 2000) {
  const std::size_t n = model.dim();
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  std::size_t per_face = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) per_face *= samples_per_edge + 1;
  for (std::size_t axis = 0; axis < n; ++axis)
    for (double sgn : {-1.0, 1.0})
      for (std::size_t flat = 0; flat < per_face; ++flat) {
        std::size_t rem = flat;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == axis) {
            x[static_cast<Eigen::Index>(i)] = sgn;
            continue;
          }
          x[static_cast<Eigen::Index>(i)] =
              -1.0 + 2.0 * static_cast<double>(rem % (samples_per_edge + 1)) / static_cast<double>(samples_per_edge);
          rem /= samples_per_edge + 1;
        }
        best = std::min(best, (model.points() * x).maxCoeff());
      }
  return best;
}

/// Bound on int_{|x|_inf > R} e^{-lambda u~} dx from u~ >= h |x|_inf.
inline double tail_bound(const PotentialModel& model, double lambda, double radius) {
  const double h = support_growth_rate(model);
  const auto n = static_cast<double>(model.dim());
  // int_R^inf (surface of the r-cube) e^{-lambda h r} dr with surface 2n (2r)^{n-1}
  const double k = lambda * h;
  double acc = 0.0;
  // int_R^inf r^{m} e^{-k r} dr = e^{-kR} sum_j m!/(j!) R^j / k^{m-j+1}
  const int m = static_cast<int>(n) - 1;
  for (int j = m; j >= 0; --j) {
    double rj = std::pow(radius, j);
    double coeff = detail::factorial(static_cast<std::size_t>(m)) / detail::factorial(static_cast<std::size_t>(j));
    acc += coeff * rj / std::pow(k, m - j + 1);
  }
  return 2.0 * n * std::pow(2.0, n - 1) * acc * std::exp(-k * radius);
}

}  // namespace torickems
