#pragma once

// Integration backends: closed-form exponential integrals over Delta, and a
// log-space trapezoid rule on boxes of R^n for the weighted integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"
#include "torickems/lattice_polytope.hpp"

namespace torickems {

// ---------------------------------------------------------------------------
// Exponential integrals over simplices

namespace detail {

inline double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

// Divided difference exp[x_0..x_k] for sorted nodes. Clusters narrower than
// kTaylorSpread use a shifted Taylor series in complete homogeneous symmetric
// polynomials; wider ones use the recurrence, whose cancellation is then mild.
constexpr double kTaylorSpread = 0.5;
constexpr std::size_t kTaylorTerms = 12;

inline double exp_dd_taylor(std::span<const double> x) {
  const std::size_t k = x.size() - 1;
  const double c = 0.5 * (x.front() + x.back());
  // h[m] = h_m(y_0..y_j), updated one variable at a time.
  std::array<double, kTaylorTerms + 1> h{};
  h[0] = 1.0;
  for (double xi : x) {
    const double y = xi - c;
    for (std::size_t m = 1; m <= kTaylorTerms; ++m) h[m] += y * h[m - 1];
  }
  double sum = 0.0;
  double inv_fact = 1.0 / factorial(k);
  for (std::size_t m = 0; m <= kTaylorTerms; ++m) {
    sum += h[m] * inv_fact;
    inv_fact /= static_cast<double>(k + m + 1);
  }
  return std::exp(c) * sum;
}

inline double exp_dd_sorted(std::span<const double> x) {
  if (x.size() == 1) return std::exp(x.front());
  if (x.back() - x.front() < kTaylorSpread) return exp_dd_taylor(x);
  return (exp_dd_sorted(x.subspan(1)) - exp_dd_sorted(x.first(x.size() - 1))) / (x.back() - x.front());
}

}  // namespace detail

/// Divided difference of t -> e^t over the given nodes (repeats allowed).
inline double exp_divided_difference(std::vector<double> nodes) {
  std::sort(nodes.begin(), nodes.end());
  return detail::exp_dd_sorted(nodes);
}

struct ExpIntegrals {
  double I0 = 0.0;
  Eigen::VectorXd I1;
  Eigen::MatrixXd I2;
};

/// I0 = int e^<xi,y>, I1 = int y e^<xi,y>, I2 = int y y^T e^<xi,y> over one simplex.
/// I1 and I2 are xi-derivatives of n! vol exp[a_0..a_n], which repeat nodes.
inline ExpIntegrals simplex_exp_integrals(const Simplex& s, const Eigen::VectorXd& xi) {
  const std::size_t n = s.vertices.size() - 1;
  std::vector<Eigen::VectorXd> v;
  std::vector<double> a;
  for (const auto& p : s.vertices) {
    v.push_back(to_eigen(p));
    a.push_back(v.back().dot(xi));
  }
  const double scale = detail::factorial(n) * simplex_volume(s).convert_to<double>();
  ExpIntegrals out;
  out.I0 = scale * exp_divided_difference(a);
  out.I1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  out.I2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i <= n; ++i) {
    auto nodes = a;
    nodes.push_back(a[i]);
    out.I1 += scale * exp_divided_difference(nodes) * v[i];
    for (std::size_t j = i; j <= n; ++j) {
      auto nodes2 = nodes;
      nodes2.push_back(a[j]);
      const double w = scale * 2.0 * exp_divided_difference(std::move(nodes2));
      if (i == j) {
        out.I2 += w * v[i] * v[i].transpose();
      } else {
        out.I2 += 0.5 * w * (v[i] * v[j].transpose() + v[j] * v[i].transpose());
      }
    }
  }
  return out;
}

inline ExpIntegrals polytope_exp_integrals(const ReflexivePolytope& p, const Eigen::VectorXd& xi) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  ExpIntegrals out{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  for (const auto& s : p.simplices()) {
    auto part = simplex_exp_integrals(s, xi);
    out.I0 += part.I0;
    out.I1 += part.I1;
    out.I2 += part.I2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Signed values in log space

struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLog from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
  }
  static SignedLog from_log(double log_abs, int sign = 1) { return {sign, log_abs}; }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  friend SignedLog operator+(const SignedLog& a, const SignedLog& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const double m = std::max(a.log_abs, b.log_abs);
    const double v = a.sign * std::exp(a.log_abs - m) + b.sign * std::exp(b.log_abs - m);
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, m + std::log(std::fabs(v))};
  }
  SignedLog operator-() const { return {-sign, log_abs}; }
  friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }
  SignedLog scaled_log(double log_factor) const { return sign == 0 ? *this : SignedLog{sign, log_abs + log_factor}; }
};

// ---------------------------------------------------------------------------
// Trapezoid quadrature on a box

struct QuadratureResult {
  double value = 0.0;
  SignedLog log_value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  int levels = 0;
};

struct GridOptions {
  double radius = 40.0;
  /// Explicit box; when empty the box is [-radius, radius]^n.
  std::vector<double> lower, upper;
  double initial_step = 2.5;
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int min_levels = 2;
  int max_levels = 9;
  unsigned threads = 0;  // 0: TORICKEMS_THREADS or hardware concurrency
};

inline unsigned thread_count(unsigned requested = 0) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TORICKEMS_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return requested ? std::min(requested, cap) : cap;
}

/// Integrand writing `components` signed log-values at x.
using LogField = std::function<void(const Eigen::VectorXd&, std::span<SignedLog>)>;

namespace detail {

// Fixed-shape pairwise reduction: the bracketing depends only on the length.
inline SignedLog pairwise_sum(std::span<const SignedLog> v) {
  if (v.empty()) return {};
  if (v.size() == 1) return v.front();
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

/// Trapezoid rule with step halving; each level reuses the previous points.
/// Stops once every component changes by at most max(rel_tol |T|, abs_tol).
inline std::vector<QuadratureResult> adaptive_grid_integral(const LogField& f, std::size_t components,
                                                            std::size_t dim, const GridOptions& opt = {}) {
  std::vector<double> lo = opt.lower, hi = opt.upper;
  if (lo.empty()) lo.assign(dim, -opt.radius);
  if (hi.empty()) hi.assign(dim, opt.radius);
  if (lo.size() != dim || hi.size() != dim) throw Error(ErrorKind::InvalidInput, "grid box has the wrong dimension");

  // Per-axis interval counts at level 0, chosen so the step is <= initial_step.
  std::vector<std::size_t> base(dim);
  for (std::size_t i = 0; i < dim; ++i)
    base[i] = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((hi[i] - lo[i]) / opt.initial_step)));

  const unsigned nthreads = thread_count(opt.threads);
  constexpr std::size_t kChunk = 4096;

  std::vector<SignedLog> total(components);  // unweighted-by-volume sums
  std::vector<QuadratureResult> prev, cur, older;
  std::size_t evaluations = 0;

  for (int level = 0; level <= opt.max_levels; ++level) {
    const std::size_t mult = std::size_t{1} << level;
    std::vector<std::size_t> count(dim);
    std::vector<double> step(dim);
    std::size_t npoints = 1;
    double log_cell = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      count[i] = base[i] * mult + 1;
      step[i] = (hi[i] - lo[i]) / static_cast<double>(base[i] * mult);
      npoints *= count[i];
      log_cell += std::log(step[i]);
    }

    // A point is new at this level unless every index is even (level > 0).
    auto is_new = [&](std::size_t flat) {
      if (level == 0) return true;
      for (std::size_t i = dim; i-- > 0;) {
        if ((flat % count[i]) % 2 == 1) return true;
        flat /= count[i];
      }
      return false;
    };

    const std::size_t nchunks = (npoints + kChunk - 1) / kChunk;
    std::vector<std::vector<SignedLog>> chunk_sums(nchunks, std::vector<SignedLog>(components));
    std::vector<std::size_t> chunk_evals(nchunks, 0);

    auto work = [&](std::size_t first_chunk, std::size_t stride) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
      std::vector<SignedLog> vals(components);
      std::vector<std::vector<SignedLog>> buf(components);
      for (std::size_t c = first_chunk; c < nchunks; c += stride) {
        for (auto& b : buf) b.clear();
        const std::size_t end = std::min(npoints, (c + 1) * kChunk);
        for (std::size_t flat = c * kChunk; flat < end; ++flat) {
          if (!is_new(flat)) continue;
          std::size_t rem = flat;
          double log_w = 0.0;
          for (std::size_t i = dim; i-- > 0;) {
            const std::size_t idx = rem % count[i];
            rem /= count[i];
            x[static_cast<Eigen::Index>(i)] = lo[i] + step[i] * static_cast<double>(idx);
            if (idx == 0 || idx + 1 == count[i]) log_w -= std::log(2.0);
          }
          std::fill(vals.begin(), vals.end(), SignedLog{});
          f(x, vals);
          ++chunk_evals[c];
          for (std::size_t k = 0; k < components; ++k) {
            if (!std::isfinite(vals[k].log_abs) && vals[k].sign != 0)
              throw Error(ErrorKind::NoConvergence, "integrand not finite at a grid point");
            buf[k].push_back(vals[k].scaled_log(log_w));
          }
        }
        for (std::size_t k = 0; k < components; ++k) chunk_sums[c][k] = detail::pairwise_sum(buf[k]);
      }
    };

    if (nthreads <= 1 || nchunks < 2) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(nthreads);
      const unsigned used = static_cast<unsigned>(std::min<std::size_t>(nthreads, nchunks));
      for (unsigned t = 0; t < used; ++t)
        pool.emplace_back([&, t] {
          try {
            work(t, used);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    for (auto e : chunk_evals) evaluations += e;
    for (std::size_t k = 0; k < components; ++k) {
      std::vector<SignedLog> col(nchunks);
      for (std::size_t c = 0; c < nchunks; ++c) col[c] = chunk_sums[c][k];
      total[k] = total[k] + detail::pairwise_sum(col);
    }

    cur.assign(components, {});
    for (std::size_t k = 0; k < components; ++k) {
      cur[k].log_value = total[k].scaled_log(log_cell);
      cur[k].value = cur[k].log_value.value();
      cur[k].evaluations = evaluations;
      cur[k].levels = level + 1;
    }

    if (!prev.empty()) {
      bool converged = level + 1 >= opt.min_levels;
      for (std::size_t k = 0; k < components; ++k) {
        const SignedLog diff = cur[k].log_value - prev[k].log_value;
        const double d = diff.sign == 0 ? 0.0 : std::exp(diff.log_abs);
        cur[k].error_estimate = d;
        // Compare in log space so huge values do not overflow.
        const double scale_log = cur[k].log_value.log_abs;
        const bool rel_ok = diff.sign == 0 || diff.log_abs <= std::log(opt.rel_tol) + scale_log;
        const bool abs_ok = opt.abs_tol > 0.0 && d <= opt.abs_tol;
        if (!(rel_ok || abs_ok)) converged = false;
      }
      if (converged) return cur;
    }
    older = prev;
    prev = cur;
  }

  std::ostringstream msg;
  msg.precision(17);
  msg << "grid quadrature did not converge after " << opt.max_levels + 1 << " levels; last estimates";
  for (std::size_t k = 0; k < components; ++k) {
    msg << " [" << k << "] " << (older.empty() ? cur[k].value : older[k].value) << " then " << cur[k].value;
  }
  throw Error(ErrorKind::NoConvergence, msg.str());
}

/// Scalar convenience overload for plain (non-log) integrands.
inline QuadratureResult adaptive_grid_integral(const std::function<double(const Eigen::VectorXd&)>& f,
                                               std::size_t dim, const GridOptions& opt = {}) {
  LogField lf = [&](const Eigen::VectorXd& x, std::span<SignedLog> out) { out[0] = SignedLog::from_value(f(x)); };
  return adaptive_grid_integral(lf, 1, dim, opt).front();
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rule on [0, 1]

struct GaussRule {
  std::vector<double> nodes, weights;
};

/// n-point rule mapped to [0,1]; nodes from boost's Legendre zeros.
inline GaussRule gauss_legendre(unsigned n) {
  GaussRule rule;
  auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));  // nonnegative half
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime<double>(static_cast<int>(n), x);
    rule.nodes.push_back(0.5 * (x + 1.0));
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));  // 2/(...) halved for [0,1]
  };
  for (double z : zeros) {
    add(z);
    if (z != 0.0) add(-z);
  }
  std::vector<std::size_t> idx(rule.nodes.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  GaussRule sorted;
  for (auto i : idx) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  return sorted;
}

}  // namespace torickems
