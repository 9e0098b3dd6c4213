#pragma once

// Independent reference computations for 2D smooth Fano polygons. Nothing in
// here calls the library: plain integer arithmetic, shoelace formulas, brute
// force scans and a hand-rolled Gauss rule on a Duffy-collapsed triangle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracle {

using I2 = std::array<long long, 2>;
using D2 = std::array<double, 2>;

struct Frac {
  long long num = 0, den = 1;

  Frac(long long n = 0, long long d = 1) : num(n), den(d) {
    if (den < 0) num = -num, den = -den;
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) num /= g, den /= g;
  }
  Frac operator+(const Frac& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Frac operator-(const Frac& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Frac operator*(const Frac& o) const { return {num * o.num, den * o.den}; }
  Frac operator/(const Frac& o) const { return {num * o.den, den * o.num}; }
  bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::vector<I2> sorted_by_angle(std::vector<I2> rays) {
  std::sort(rays.begin(), rays.end(), [](const I2& a, const I2& b) {
    return std::atan2(static_cast<double>(a[1]), static_cast<double>(a[0])) <
           std::atan2(static_cast<double>(b[1]), static_cast<double>(b[0]));
  });
  return rays;
}

/// Vertices of {m : <m, r> <= 1}, one per pair of angularly adjacent rays.
inline std::vector<std::array<Frac, 2>> dual_vertices(const std::vector<I2>& rays_in) {
  auto rays = sorted_by_angle(rays_in);
  std::vector<std::array<Frac, 2>> out;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const auto& a = rays[i];
    const auto& b = rays[(i + 1) % rays.size()];
    const long long det = a[0] * b[1] - a[1] * b[0];
    out.push_back({Frac(b[1] - a[1], det), Frac(a[0] - b[0], det)});
  }
  return out;
}

inline Frac area(const std::vector<std::array<Frac, 2>>& poly) {
  Frac twice;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice = twice + (p[0] * q[1] - q[0] * p[1]);
  }
  return twice / Frac(2);
}

inline std::array<Frac, 2> centroid(const std::vector<std::array<Frac, 2>>& poly) {
  Frac cx, cy;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const Frac cross = p[0] * q[1] - q[0] * p[1];
    cx = cx + (p[0] + q[0]) * cross;
    cy = cy + (p[1] + q[1]) * cross;
  }
  const Frac six_a = area(poly) * Frac(6);
  return {cx / six_a, cy / six_a};
}

inline long long pair(const I2& a, const I2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline std::vector<I2> lattice_points(const std::vector<I2>& rays, long long box = 6) {
  std::vector<I2> out;
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y) {
      const I2 m{x, y};
      if (std::all_of(rays.begin(), rays.end(), [&](const I2& r) { return pair(m, r) <= 1; })) out.push_back(m);
    }
  return out;
}

/// Lattice automorphisms (acting on M) that permute the vertex set.
inline std::size_t automorphism_count(const std::vector<I2>& rays) {
  std::set<std::pair<long long, long long>> verts;
  for (const auto& v : dual_vertices(rays)) {
    if (v[0].den != 1 || v[1].den != 1) throw std::logic_error("non-integral vertex");
    verts.insert({v[0].num, v[1].num});
  }
  std::size_t count = 0;
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      for (long long c = -2; c <= 2; ++c)
        for (long long d = -2; d <= 2; ++d) {
          const long long det = a * d - b * c;
          if (det != 1 && det != -1) continue;
          bool ok = true;
          for (const auto& [x, y] : verts)
            if (!verts.count({a * x + b * y, c * x + d * y})) ok = false;
          count += ok;
        }
  return count;
}

/// m with <m, r> = -1 for exactly one ray and >= 0 on the others.
inline std::size_t root_count(const std::vector<I2>& rays, long long box = 6) {
  std::size_t count = 0;
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y) {
      int minus_one = 0;
      bool ok = true;
      for (const auto& r : rays) {
        const long long p = pair({x, y}, r);
        if (p == -1) ++minus_one;
        else if (p < 0) ok = false;
      }
      count += ok && minus_one == 1;
    }
  return count;
}

/// d_i from r_{i-1} + r_{i+1} = -d_i r_i, keyed in angular order.
inline std::vector<std::pair<I2, long long>> self_intersections(const std::vector<I2>& rays_in) {
  auto rays = sorted_by_angle(rays_in);
  std::vector<std::pair<I2, long long>> out;
  const std::size_t k = rays.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& prev = rays[(i + k - 1) % k];
    const auto& next = rays[(i + 1) % k];
    const I2 s{prev[0] + next[0], prev[1] + next[1]};
    const auto& r = rays[i];
    const long long d = r[0] != 0 ? -s[0] / r[0] : -s[1] / r[1];
    out.push_back({r, d});
  }
  return out;
}

// ---- quadrature

struct Gauss {
  std::vector<double> x, w;  // on [0, 1]
};

/// Gauss-Legendre by Newton iteration on the three-term recurrence.
inline Gauss gauss(int n) {
  Gauss g;
  for (int i = 1; i <= n; ++i) {
    double z = std::cos(M_PI * (i - 0.25) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    g.x.push_back(0.5 * (1.0 - z));
    g.w.push_back(1.0 / ((1.0 - z * z) * dp * dp));
  }
  return g;
}

struct Moments2 {
  double m0 = 0;
  D2 m1{0, 0};
  std::array<D2, 2> m2{D2{0, 0}, D2{0, 0}};
};

/// int over the polygon of e^{<xi, y>} (1, y, y y^T), fan triangles from the
/// origin, each mapped from the unit square by (s, t) -> s (a + t (b - a)).
inline Moments2 exp_moments(const std::vector<I2>& rays, const D2& xi, int n = 40) {
  const auto g = gauss(n);
  Moments2 out;
  auto verts = dual_vertices(rays);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const D2 a{verts[i][0].value(), verts[i][1].value()};
    const D2 b{verts[(i + 1) % verts.size()][0].value(), verts[(i + 1) % verts.size()][1].value()};
    const double jac = std::fabs(a[0] * b[1] - a[1] * b[0]);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double s = g.x[p], t = g.x[q];
        const D2 y{s * (a[0] + t * (b[0] - a[0])), s * (a[1] + t * (b[1] - a[1]))};
        const double w = g.w[p] * g.w[q] * jac * s * std::exp(xi[0] * y[0] + xi[1] * y[1]);
        out.m0 += w;
        for (int k = 0; k < 2; ++k) {
          out.m1[k] += w * y[k];
          for (int l = 0; l < 2; ++l) out.m2[k][l] += w * y[k] * y[l];
        }
      }
  }
  return out;
}

/// Soliton vector restricted to the diagonal xi = c (1, 1): the root of
/// c -> int (y1 + y2) e^{c (y1 + y2)}, which is increasing in c.
inline double diagonal_soliton(const std::vector<I2>& rays) {
  auto g = [&](double c) {
    auto m = exp_moments(rays, {c, c});
    return m.m1[0] + m.m1[1];
  };
  double lo = -5.0, hi = 5.0;
  if (g(lo) > 0 || g(hi) < 0) throw std::logic_error("bisection bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- exclusion tests by brute force (2D, candidates given as facet rays)

inline std::vector<I2> facet_vertices(const std::vector<I2>& rays, const I2& ray) {
  std::vector<I2> out;
  for (const auto& v : dual_vertices(rays))
    if (v[0].den == 1 && v[1].den == 1 && pair({v[0].num, v[1].num}, ray) == 1) out.push_back({v[0].num, v[1].num});
  return out;
}

/// Some lattice xi with <bary, xi> < 0 and <v, xi> <= 0 on every vertex of
/// the union of the given facets.
inline bool ke_excludable(const std::vector<I2>& rays, const std::vector<I2>& facets, long long box = 6) {
  const auto bary = centroid(dual_vertices(rays));
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y) {
      if (!((bary[0] * Frac(x) + bary[1] * Frac(y)).num < 0)) continue;
      bool ok = true;
      for (const auto& f : facets)
        for (const auto& v : facet_vertices(rays, f)) ok = ok && pair(v, {x, y}) <= 0;
      if (ok) return true;
    }
  return false;
}

/// Some lattice eta parallel to every facet ray with <v, eta> < 0 on all
/// vertices of the union.
inline bool krs_excludable(const std::vector<I2>& rays, const std::vector<I2>& facets, long long box = 6) {
  for (long long x = -box; x <= box; ++x)
    for (long long y = -box; y <= box; ++y) {
      if (x == 0 && y == 0) continue;
      bool ok = true;
      for (const auto& f : facets) {
        ok = ok && x * f[1] - y * f[0] == 0;
        for (const auto& v : facet_vertices(rays, f)) ok = ok && pair(v, {x, y}) < 0;
      }
      if (ok) return true;
    }
  return false;
}

}  // namespace oracle
