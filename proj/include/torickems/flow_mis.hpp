#pragma once

// Growth of int exp(-u~ - alpha psi~_t) over thin strips along each fan ray of
// a toric surface, and the MIS assembled from the divergent facets.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "torickems/errors.hpp"
#include "torickems/fixtures.hpp"
#include "torickems/invariants.hpp"
#include "torickems/lattice_polytope.hpp"
#include "torickems/potentials.hpp"
#include "torickems/quadrature.hpp"

namespace torickems {

/// Strip x = s rho/|rho| + u perp with |u| < eps and s >= s0.
struct FacetRegion {
  LatticeVector ray;
  double eps = 0.25;
  double s0 = 8.0;
  Eigen::Vector2d dir;
  Eigen::Vector2d perp;

  Eigen::VectorXd point(double s, double u) const { return s * dir + u * perp; }
};

inline FacetRegion facet_region(const Fan& fan, const LatticeVector& ray, double eps = 0.25, double s0 = 8.0) {
  if (fan.dim != 2) throw Error(ErrorKind::DimensionUnsupported, "facet regions need a 2-dimensional fan");
  if (std::find(fan.rays.begin(), fan.rays.end(), ray) == fan.rays.end())
    throw Error(ErrorKind::InvalidInput, ray.to_string() + " is not a ray of the fan");
  FacetRegion r;
  r.ray = ray;
  r.eps = eps;
  r.s0 = s0;
  r.dir = Eigen::Vector2d(static_cast<double>(ray[0]), static_cast<double>(ray[1])).normalized();
  r.perp = Eigen::Vector2d(-r.dir[1], r.dir[0]);
  return r;
}

struct StripOptions {
  double transverse_step = 0.05;
  double longitudinal_step = 0.1;
  /// Upper end of s; when unset, 2 t |xi|_inf + 20.
  std::optional<double> s_max;
  /// Max allowed |log I(h) - log I(2h)|.
  double log_tol = 1e-2;
};

struct StripIntegral {
  double log_value = 0.0;
  double log_value_coarse = 0.0;  // with doubled steps
  /// Part of the integral over points with u~ + psi~ >= 0, and the analytic
  /// upper bound int e^{-(1 - alpha) u~} over the same points.
  double log_restricted = -std::numeric_limits<double>::infinity();
  double log_restricted_bound = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

/// log int_region exp(-u~(x) - alpha psi~_t(x)) dx by the trapezoid rule in
/// (s, u), summed in log space.
inline StripIntegral alpha_log_integral(const PotentialModel& model, const Eigen::VectorXd& xi, double alpha, double t,
                                        const FacetRegion& region, const StripOptions& opt = {}) {
  const auto psi = flow_potential(model, xi, t);
  const double s_max = opt.s_max.value_or(2.0 * t * xi.lpNorm<Eigen::Infinity>() + 20.0);
  if (s_max <= region.s0) throw Error(ErrorKind::InvalidInput, "strip is empty");
  // Step counts rounded to even so the coarse rule uses every other point.
  auto even_count = [](double len, double h) {
    auto k = static_cast<std::size_t>(std::ceil(len / h));
    return k + (k % 2);
  };
  const std::size_t ns = even_count(s_max - region.s0, opt.longitudinal_step);
  const std::size_t nu = even_count(2.0 * region.eps, opt.transverse_step);
  const double hs = (s_max - region.s0) / static_cast<double>(ns);
  const double hu = 2.0 * region.eps / static_cast<double>(nu);

  std::vector<SignedLog> fine, coarse, restricted, bound;
  fine.reserve((ns + 1) * (nu + 1));
  StripIntegral out;
  for (std::size_t i = 0; i <= ns; ++i) {
    const double s = region.s0 + hs * static_cast<double>(i);
    const double wi = (i == 0 || i == ns) ? 0.5 : 1.0;
    for (std::size_t j = 0; j <= nu; ++j) {
      const double u = -region.eps + hu * static_cast<double>(j);
      const double wj = (j == 0 || j == nu) ? 0.5 : 1.0;
      const Eigen::VectorXd x = region.point(s, u);
      const double ut = potential_value(model, x);
      const double ps = psi(x);
      const double log_f = -ut - alpha * ps;
      const double log_w = std::log(wi * wj);
      fine.push_back(SignedLog::from_log(log_f + log_w));
      if (i % 2 == 0 && j % 2 == 0) coarse.push_back(SignedLog::from_log(log_f + log_w));
      if (ut + ps >= 0.0) {
        restricted.push_back(SignedLog::from_log(log_f + log_w));
        bound.push_back(SignedLog::from_log(-(1.0 - alpha) * ut + log_w));
      }
      ++out.evaluations;
    }
  }
  const double log_cell = std::log(hs * hu);
  out.log_value = detail::pairwise_sum(fine).log_abs + log_cell;
  out.log_value_coarse = detail::pairwise_sum(coarse).log_abs + log_cell + std::log(4.0);
  if (!restricted.empty()) {
    out.log_restricted = detail::pairwise_sum(restricted).log_abs + log_cell;
    out.log_restricted_bound = detail::pairwise_sum(bound).log_abs + log_cell;
  }
  if (!(std::fabs(out.log_value - out.log_value_coarse) <= opt.log_tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "strip integral along " << region.ray.to_string() << " at t = " << t << ": step 2h gives "
        << out.log_value_coarse << ", step h gives " << out.log_value;
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return out;
}

struct GrowthSeries {
  double alpha = 0.0;
  std::vector<double> t_grid;
  std::vector<double> log_integrals;
};

enum class Growth { Divergent, Bounded, Inconclusive };

inline std::string to_string(Growth g) {
  switch (g) {
    case Growth::Divergent: return "divergent";
    case Growth::Bounded: return "bounded";
    case Growth::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct GrowthClass {
  Growth kind = Growth::Inconclusive;
  double slope = 0.0;
  double residual = 0.0;  // RMS of the linear fit
  /// (slope - predicted) / predicted with predicted = (2 alpha - 1) beta.
  double relative_deviation = 0.0;
};

struct GrowthThresholds {
  double divergent = 0.05;
  double bounded = 0.02;
  /// Below this alpha both thresholds shrink with the expected rate 2 alpha - 1.
  double reference_alpha = 0.7;

  double scale(double alpha) const { return std::min(1.0, (2.0 * alpha - 1.0) / (2.0 * reference_alpha - 1.0)); }
};

/// Least-squares slope of log-integral against t.
inline GrowthClass growth_classify(const GrowthSeries& series, double beta, const GrowthThresholds& th = {}) {
  const std::size_t m = series.t_grid.size();
  if (m < 4 || series.log_integrals.size() != m)
    throw Error(ErrorKind::InvalidInput, "growth fit needs at least 4 points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = series.t_grid[i];
    y[static_cast<Eigen::Index>(i)] = series.log_integrals[i];
  }
  Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  GrowthClass out;
  out.slope = coef[1];
  out.residual = std::sqrt((a * coef - y).squaredNorm() / static_cast<double>(m));
  const double k = th.scale(series.alpha);
  if (out.slope > k * th.divergent) {
    out.kind = Growth::Divergent;
  } else if (std::fabs(out.slope) < k * th.bounded) {
    out.kind = Growth::Bounded;
  }
  const double predicted = (2.0 * series.alpha - 1.0) * beta;
  if (predicted != 0.0) out.relative_deviation = (out.slope - predicted) / predicted;
  return out;
}

struct FlowOptions {
  std::vector<double> alphas{0.7, 0.8, 0.9};
  /// Largest flow time; when unset, 40 / |xi_s|_inf.
  std::optional<double> t_max;
  double eps = 0.25;
  double s0 = 8.0;
  StripOptions strip;
  GrowthThresholds thresholds;
};

struct FacetFlow {
  std::size_t ray_id = 0;
  std::string face_id;
  int self_intersection = 0;
  std::vector<GrowthSeries> series;  // one per alpha
  std::vector<GrowthClass> classes;
  /// Restricted integrals stayed below the e^{-(1-alpha) u~} bound.
  bool bound_respected = true;
};

struct FlowReport {
  std::string fixture;
  Eigen::VectorXd xi_s;
  double beta = 0.0;  // |xi_s|_inf
  std::vector<double> alphas;
  std::vector<double> t_grid;
  std::vector<FacetFlow> facets;
  /// Ray ids divergent for every alpha.
  std::vector<std::size_t> divergent;
  /// Ray ids added by the connectedness completion.
  std::vector<std::size_t> completed;
  std::vector<std::size_t> mis;
  std::vector<std::string> mis_face_ids;
  bool alpha_stable = true;
  /// Completion agrees with the direct classification of the added facets.
  bool completion_consistent = true;
  bool any_inconclusive = false;
  double sup_check = 0.0;  // max over t of the grid sup of psi~_t
  std::string conclusion;
};

inline FlowReport flow_mis_report(const Fixture& fixture, const FlowOptions& opt = {}) {
  for (double a : opt.alphas)
    if (!(a > 0.5 && a < 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (1/2, 1)");
  auto fp = build_polytope(fixture.rays);
  if (fp.polytope.dim() != 2) throw Error(ErrorKind::DimensionUnsupported, "flow analysis needs a surface");
  PotentialModel model(fp);
  auto sol = solve_soliton_vector(fp.polytope);

  FlowReport rep;
  rep.fixture = fixture.name;
  rep.xi_s = sol.xi_s;
  rep.beta = sol.xi_s.lpNorm<Eigen::Infinity>();
  rep.alphas = opt.alphas;
  if (rep.beta < 1e-9 && !opt.t_max)
    throw Error(ErrorKind::InvalidInput, "soliton vector vanishes; the flow potentials are trivial");
  const double t_max = opt.t_max.value_or(40.0 / rep.beta);
  for (int k = 4; k <= 8; ++k) rep.t_grid.push_back(k * t_max / 8.0);

  for (double t : rep.t_grid) {
    const double sup = flow_grid_sup(flow_potential(model, sol.xi_s, t));
    rep.sup_check = std::max(rep.sup_check, sup);
    if (sup > 1e-9) {
      std::ostringstream msg;
      msg << "psi~_t has grid sup " << sup << " > 0 at t = " << t;
      throw Error(ErrorKind::NoConvergence, msg.str());
    }
  }

  const auto selfint = self_intersections(fp.fan);
  const auto& rays = fp.fan.rays;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    FacetFlow ff;
    ff.ray_id = r;
    ff.face_id = facet_id(rays[r]);
    ff.self_intersection = selfint[r];
    const auto region = facet_region(fp.fan, rays[r], opt.eps, opt.s0);
    for (double alpha : opt.alphas) {
      GrowthSeries gs;
      gs.alpha = alpha;
      gs.t_grid = rep.t_grid;
      for (double t : rep.t_grid) {
        auto si = alpha_log_integral(model, sol.xi_s, alpha, t, region, opt.strip);
        gs.log_integrals.push_back(si.log_value);
        if (si.log_restricted > si.log_restricted_bound + 1e-12) ff.bound_respected = false;
      }
      ff.classes.push_back(growth_classify(gs, rep.beta, opt.thresholds));
      ff.series.push_back(std::move(gs));
    }
    rep.facets.push_back(std::move(ff));
  }

  // Divergent for every alpha; flag alpha-dependence and inconclusive fits.
  for (const auto& ff : rep.facets) {
    bool all_div = true;
    for (const auto& c : ff.classes) {
      if (c.kind != Growth::Divergent) all_div = false;
      if (c.kind == Growth::Inconclusive) rep.any_inconclusive = true;
      if (c.kind != ff.classes.front().kind) rep.alpha_stable = false;
    }
    if (all_div) rep.divergent.push_back(ff.ray_id);
  }

  // Connectedness completion: a facet whose two neighbours are both in the set.
  const std::size_t m = rays.size();
  std::vector<bool> in(m, false);
  for (auto r : rep.divergent) in[r] = true;
  std::vector<bool> final_set = in;
  if (!rep.divergent.empty()) {
    for (std::size_t r = 0; r < m; ++r) {
      if (in[r]) continue;
      if (in[(r + m - 1) % m] && in[(r + 1) % m] && rep.divergent.size() + 1 < m) {
        final_set[r] = true;
        rep.completed.push_back(r);
        for (const auto& c : rep.facets[r].classes)
          if (c.kind != Growth::Divergent) rep.completion_consistent = false;
      }
    }
  }
  for (std::size_t r = 0; r < m; ++r)
    if (final_set[r]) {
      rep.mis.push_back(r);
      rep.mis_face_ids.push_back(rep.facets[r].face_id);
    }

  std::ostringstream c;
  if (rep.mis.empty()) {
    c << "no facet diverges";
  } else {
    c << "flow MIS = ";
    for (std::size_t i = 0; i < rep.mis.size(); ++i) {
      const auto r = rep.mis[i];
      if (i) c << " + ";
      c << rep.facets[r].face_id;
      auto it = fixture.labels.find(rep.facets[r].face_id);
      if (it != fixture.labels.end()) c << " [" << it->second << "]";
    }
    const bool all_minus_one = std::all_of(rep.mis.begin(), rep.mis.end(), [&](std::size_t r) {
      return rep.facets[r].self_intersection == -1;
    });
    if (rep.mis.size() > 1 && all_minus_one) c << " (chain of " << rep.mis.size() << " (-1)-curves)";
  }
  if (rep.any_inconclusive) c << "; some fits inconclusive";
  rep.conclusion = c.str();
  return rep;
}

inline std::string flow_csv(const FlowReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "facet,alpha,t,log_integral\n";
  for (const auto& ff : rep.facets)
    for (const auto& gs : ff.series)
      for (std::size_t i = 0; i < gs.t_grid.size(); ++i)
        out << '"' << ff.face_id << "\"," << gs.alpha << ',' << gs.t_grid[i] << ',' << gs.log_integrals[i] << '\n';
  return out.str();
}

}  // namespace torickems
