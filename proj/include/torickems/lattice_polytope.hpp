#pragma once

// Reflexive polytopes of smooth toric Fano manifolds, built from the primitive
// ray generators of their fans. Everything here is exact.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"

namespace torickems {

struct Fan {
  std::size_t dim = 0;
  std::vector<LatticeVector> rays;
  /// Ray ids of each maximal cone, sorted; indexed like the polytope vertices.
  std::vector<std::vector<std::size_t>> max_cones;
};

struct Simplex {
  std::vector<RationalVector> vertices;  // dim + 1 points
};

/// Delta = { a in M_R : <a, b_rho> <= 1 for every ray }.
class ReflexivePolytope {
 public:
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<LatticeVector>& vertices() const noexcept { return vertices_; }
  /// Primitive facet normals; ray ids agree with Fan::rays.
  const std::vector<LatticeVector>& rays() const noexcept { return rays_; }
  const std::vector<LatticeVector>& lattice_points() const noexcept { return lattice_points_; }
  /// Rays tight at vertex k, i.e. the maximal cone dual to it.
  const std::vector<std::size_t>& vertex_cone(std::size_t k) const { return vertex_cones_[k]; }
  /// Pulling triangulation from vertex 0, exact.
  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }

  bool contains(const LatticeVector& m) const {
    return std::all_of(rays_.begin(), rays_.end(), [&](const LatticeVector& b) { return dot(m, b) <= 1; });
  }
  bool contains(const RationalVector& y) const {
    return std::all_of(rays_.begin(), rays_.end(), [&](const LatticeVector& b) { return dot(y, b) <= 1; });
  }

  /// Vertices lying on every facet listed in `cone`.
  std::vector<std::size_t> face_vertices(const std::vector<std::size_t>& cone) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
      const auto& vc = vertex_cones_[k];
      if (std::includes(vc.begin(), vc.end(), cone.begin(), cone.end())) out.push_back(k);
    }
    return out;
  }

  /// True when the ray set is contained in some maximal cone.
  bool is_cone(const std::vector<std::size_t>& cone) const {
    return std::any_of(vertex_cones_.begin(), vertex_cones_.end(), [&](const auto& vc) {
      return std::includes(vc.begin(), vc.end(), cone.begin(), cone.end());
    });
  }

 private:
  friend struct PolytopeBuilder;
  std::size_t dim_ = 0;
  std::vector<LatticeVector> vertices_;
  std::vector<LatticeVector> rays_;
  std::vector<LatticeVector> lattice_points_;
  std::vector<std::vector<std::size_t>> vertex_cones_;
  std::vector<Simplex> simplices_;
};

struct FanoPolytope {
  ReflexivePolytope polytope;
  Fan fan;
};

struct Face {
  std::string id;
  std::size_t dim = 0;
  std::vector<std::size_t> vertex_ids;
  std::vector<std::size_t> dual_cone;  // ray ids
};

/// Element of the automorphism group of Delta, acting on M by y -> matrix * y.
struct LatticeSymmetry {
  IntMatrix matrix;

  LatticeVector apply(const LatticeVector& y) const {
    LatticeVector out(y.size());
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
      for (Eigen::Index j = 0; j < matrix.cols(); ++j) out[i] += matrix(i, j) * y[j];
    return out;
  }

  /// Contragredient action on N (inverse transpose), preserving the pairing.
  IntMatrix dual_matrix() const {
    const auto n = static_cast<std::size_t>(matrix.rows());
    RationalMatrix m(n, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(matrix(i, j));
    IntMatrix out(matrix.rows(), matrix.cols());
    for (std::size_t col = 0; col < n; ++col) {
      // row `col` of the inverse, read as column `col` of its transpose
      RationalVector e(n, Rational(0));
      e[col] = 1;
      RationalMatrix mt(n, RationalVector(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mt[i][j] = m[j][i];
      auto x = exact::solve(mt, e);
      for (std::size_t i = 0; i < n; ++i)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) =
            boost::multiprecision::numerator((*x)[i]).convert_to<std::int64_t>();
    }
    return out;
  }

  LatticeVector apply_dual(const LatticeVector& x) const {
    IntMatrix d = dual_matrix();
    LatticeVector out(x.size());
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = 0; j < d.cols(); ++j) out[i] += d(i, j) * x[j];
    return out;
  }

  Eigen::VectorXd apply_dual(const Eigen::VectorXd& x) const { return dual_matrix().cast<double>() * x; }

  friend bool operator==(const LatticeSymmetry& a, const LatticeSymmetry& b) { return a.matrix == b.matrix; }
};

struct DemazureRoot {
  LatticeVector m;
  std::size_t distinguished_ray = 0;
};

struct Moments {
  Rational volume;
  RationalVector barycenter;
};

struct SupportRange {
  double min = 0.0;
  double max = 0.0;
  std::vector<std::size_t> argmin;  // vertex ids
  std::vector<std::size_t> argmax;
};

namespace detail {

// Counterclockwise from the lexicographically smallest ray.
inline void sort_rays_ccw(std::vector<LatticeVector>& rays) {
  auto start = *std::min_element(rays.begin(), rays.end());
  auto cross = [](const LatticeVector& a, const LatticeVector& b) { return a[0] * b[1] - a[1] * b[0]; };
  auto half = [&](const LatticeVector& r) {
    auto c = cross(start, r);
    return (c > 0 || (c == 0 && dot(start, r) > 0)) ? 0 : 1;
  };
  std::sort(rays.begin(), rays.end(), [&](const LatticeVector& a, const LatticeVector& b) {
    if (a == start) return b != start;
    if (b == start) return false;
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
  });
}

inline std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ids[i]);
  }
  return s + "}";
}

inline std::string describe_cone(const std::vector<LatticeVector>& rays, const std::vector<std::size_t>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += rays[ids[i]].to_string();
  }
  return s + "}";
}

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> pick(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      f(pick);
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace detail

struct PolytopeBuilder {
  static FanoPolytope build(std::vector<LatticeVector> rays);

 private:
  static void triangulate(ReflexivePolytope& p);
};

inline FanoPolytope PolytopeBuilder::build(std::vector<LatticeVector> rays) {
  if (rays.empty()) throw Error(ErrorKind::InvalidInput, "no rays given");
  const std::size_t n = rays.front().size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "rays must have dimension >= 1");
  for (const auto& r : rays) {
    if (r.size() != n) throw Error(ErrorKind::InvalidInput, "ray " + r.to_string() + " has the wrong dimension");
    if (!r.is_primitive()) throw Error(ErrorKind::InvalidInput, "ray " + r.to_string() + " is not primitive");
  }
  {
    auto sorted = rays;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::InvalidInput, "duplicate ray");
  }
  if (n == 2) {
    detail::sort_rays_ccw(rays);
  } else {
    std::sort(rays.begin(), rays.end());
  }

  // Completeness: the recession cone {d : <b, d> <= 0 for all rays} must be {0}.
  {
    auto gens = exact::cone_generators(exact::from_lattice_rows(rays), n);
    if (!gens.lineality.empty())
      throw Error(ErrorKind::NotComplete, "rays do not span; direction " +
                                              primitive_multiple(gens.lineality.front()).to_string() + " is uncovered");
    if (!gens.rays.empty())
      throw Error(ErrorKind::NotComplete,
                  "no cone contains direction " + primitive_multiple(gens.rays.front()).to_string());
  }

  // Vertices: solutions of n independent tight facet equations satisfying all others.
  std::vector<RationalVector> verts;
  std::vector<std::vector<std::size_t>> cones;
  detail::for_each_subset(rays.size(), n, [&](const std::vector<std::size_t>& pick) {
    RationalMatrix a;
    for (auto i : pick) a.push_back(to_rational(rays[i]));
    auto sol = exact::solve(a, RationalVector(n, Rational(1)));
    if (!sol) return;
    std::vector<std::size_t> tight;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      Rational v = dot(*sol, rays[r]);
      if (v > 1) return;
      if (v == 1) tight.push_back(r);
    }
    if (std::find(verts.begin(), verts.end(), *sol) != verts.end()) return;
    verts.push_back(*sol);
    cones.push_back(std::move(tight));
  });

  // Every ray must support a facet: its tight vertices span an (n-1)-flat.
  for (std::size_t r = 0; r < rays.size(); ++r) {
    RationalMatrix diffs;
    std::optional<RationalVector> base;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      if (!std::binary_search(cones[k].begin(), cones[k].end(), r)) continue;
      if (!base) {
        base = verts[k];
        continue;
      }
      RationalVector d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = verts[k][i] - (*base)[i];
      diffs.push_back(std::move(d));
    }
    std::size_t face_dim = base ? exact::rank(diffs, n) : 0;
    if (!base || face_dim + 1 != n)
      throw Error(ErrorKind::NotReflexive, "ray " + rays[r].to_string() + " is not a facet normal of the polytope");
  }

  for (std::size_t k = 0; k < verts.size(); ++k) {
    if (!is_integral(verts[k])) {
      std::string coords = "(";
      for (std::size_t i = 0; i < n; ++i) coords += (i ? "," : "") + verts[k][i].str();
      throw Error(ErrorKind::NotReflexive,
                  "vertex " + coords + ") of cone " + detail::describe_cone(rays, cones[k]) + " is not integral");
    }
  }
  for (std::size_t k = 0; k < verts.size(); ++k) {
    std::vector<LatticeVector> gens;
    for (auto r : cones[k]) gens.push_back(rays[r]);
    if (gens.size() != n)
      throw Error(ErrorKind::NotSmooth, "cone " + detail::describe_cone(rays, cones[k]) + " is not simplicial");
    auto det = exact::integer_determinant(gens);
    if (det != 1 && det != -1)
      throw Error(ErrorKind::NotSmooth, "cone " + detail::describe_cone(rays, cones[k]) + " has determinant " +
                                            std::to_string(det));
  }

  // Deterministic vertex order: in the plane vertex k sits between rays k and k+1.
  std::vector<std::size_t> order(verts.size());
  std::iota(order.begin(), order.end(), 0);
  if (n == 2) {
    const std::size_t m = rays.size();
    auto slot = [&](std::size_t k) {
      const auto& c = cones[k];
      // c = {i, i+1} or {0, m-1} for the wrap-around cone
      return (c[0] == 0 && c[1] == m - 1) ? m - 1 : c[0];
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return slot(a) < slot(b); });
  } else {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return verts[a] < verts[b]; });
  }

  FanoPolytope out;
  auto& p = out.polytope;
  p.dim_ = n;
  p.rays_ = rays;
  for (auto k : order) {
    p.vertices_.push_back(to_lattice(verts[k]));
    p.vertex_cones_.push_back(cones[k]);
  }

  // Lattice points by scanning the vertex bounding box.
  LatticeVector lo = p.vertices_.front(), hi = p.vertices_.front();
  for (const auto& v : p.vertices_)
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  LatticeVector cur = lo;
  while (true) {
    if (p.contains(cur)) p.lattice_points_.push_back(cur);
    std::size_t i = n;
    while (i-- > 0) {
      if (cur[i] < hi[i]) {
        ++cur[i];
        break;
      }
      cur[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  std::sort(p.lattice_points_.begin(), p.lattice_points_.end());

  triangulate(p);

  out.fan.dim = n;
  out.fan.rays = rays;
  out.fan.max_cones = p.vertex_cones_;
  return out;
}

inline void PolytopeBuilder::triangulate(ReflexivePolytope& p) {
  const std::size_t n = p.dim_;
  std::function<std::vector<std::vector<std::size_t>>(const std::vector<std::size_t>&)> pull =
      [&](const std::vector<std::size_t>& cone) -> std::vector<std::vector<std::size_t>> {
    auto verts = p.face_vertices(cone);
    if (cone.size() == n) return {{verts.front()}};
    const std::size_t apex = verts.front();
    const auto& apex_cone = p.vertex_cones_[apex];
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t r = 0; r < p.rays_.size(); ++r) {
      if (std::binary_search(cone.begin(), cone.end(), r)) continue;
      if (std::binary_search(apex_cone.begin(), apex_cone.end(), r)) continue;
      auto sub = cone;
      sub.insert(std::upper_bound(sub.begin(), sub.end(), r), r);
      if (!p.is_cone(sub)) continue;
      for (auto s : pull(sub)) {
        s.push_back(apex);
        out.push_back(std::move(s));
      }
    }
    return out;
  };
  for (const auto& ids : pull({})) {
    Simplex s;
    for (auto k : ids) s.vertices.push_back(to_rational(p.vertices_[k]));
    p.simplices_.push_back(std::move(s));
  }
}

/// Builds Delta and its normal fan from primitive ray generators.
/// Throws NotComplete, NotReflexive or NotSmooth naming the offending ray or cone.
inline FanoPolytope build_polytope(std::vector<LatticeVector> rays) { return PolytopeBuilder::build(std::move(rays)); }

inline const std::vector<LatticeVector>& lattice_points(const ReflexivePolytope& p) { return p.lattice_points(); }

inline std::string facet_id(const LatticeVector& ray) { return "F" + ray.to_string(); }

/// All proper faces: facets first (ray order), then by decreasing dimension, vertices last.
inline std::vector<Face> face_lattice(const FanoPolytope& fp) {
  const auto& p = fp.polytope;
  const std::size_t n = p.dim();
  std::set<std::vector<std::size_t>> seen;
  for (const auto& mc : fp.fan.max_cones) {
    detail::for_each_subset(mc.size(), 0, [](const auto&) {});
    for (std::size_t k = 1; k <= mc.size(); ++k) {
      detail::for_each_subset(mc.size(), k, [&](const std::vector<std::size_t>& pick) {
        std::vector<std::size_t> cone;
        for (auto i : pick) cone.push_back(mc[i]);
        seen.insert(cone);
      });
    }
  }
  std::vector<Face> faces;
  for (const auto& cone : seen) {
    Face f;
    f.dim = n - cone.size();
    f.dual_cone = cone;
    f.vertex_ids = p.face_vertices(cone);
    faces.push_back(std::move(f));
  }
  std::stable_sort(faces.begin(), faces.end(), [&](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    if (a.dim == 0) return a.vertex_ids < b.vertex_ids;
    return a.dual_cone < b.dual_cone;
  });
  for (auto& f : faces) {
    if (f.dim + 1 == n) {
      f.id = facet_id(p.rays()[f.dual_cone.front()]);
    } else if (f.dim == 0) {
      f.id = "V" + std::to_string(f.vertex_ids.front());
    } else {
      f.id = "C" + detail::join_ids(f.dual_cone);
    }
  }
  return faces;
}

/// The finite group of unimodular maps of M permuting the vertices of Delta.
/// Candidates come from vertex-to-vertex assignments of a fixed vertex basis.
inline std::vector<LatticeSymmetry> weyl_group(const ReflexivePolytope& p) {
  const std::size_t n = p.dim();
  const auto& verts = p.vertices();
  std::vector<std::size_t> basis;
  RationalMatrix rows;
  for (std::size_t k = 0; k < verts.size() && basis.size() < n; ++k) {
    auto trial = rows;
    trial.push_back(to_rational(verts[k]));
    if (exact::rank(trial, n) == trial.size()) {
      rows = std::move(trial);
      basis.push_back(k);
    }
  }
  // rows holds the basis vertices as rows: B. A symmetry G with G b_j = w_j
  // satisfies B G^T = W, solved column by column.
  std::set<LatticeVector> vertex_set(verts.begin(), verts.end());
  std::vector<LatticeSymmetry> group;
  std::vector<std::size_t> images(n);
  std::vector<bool> used(verts.size(), false);
  std::function<void(std::size_t)> assign = [&](std::size_t depth) {
    if (depth == n) {
      IntMatrix g(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        RationalVector rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = verts[images[j]][i];
        auto row = exact::solve(rows, rhs);
        if (!row || !is_integral(*row)) return;
        for (std::size_t j = 0; j < n; ++j)
          g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              boost::multiprecision::numerator((*row)[j]).convert_to<std::int64_t>();
      }
      LatticeSymmetry s{g};
      std::vector<LatticeVector> gl;
      for (std::size_t i = 0; i < n; ++i) {
        LatticeVector col(n);
        for (std::size_t j = 0; j < n; ++j) col[j] = g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        gl.push_back(col);
      }
      auto det = exact::integer_determinant(gl);
      if (det != 1 && det != -1) return;
      for (const auto& v : verts)
        if (!vertex_set.count(s.apply(v))) return;
      if (std::find(group.begin(), group.end(), s) == group.end()) group.push_back(std::move(s));
      return;
    }
    for (std::size_t k = 0; k < verts.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      images[depth] = k;
      assign(depth + 1);
      used[k] = false;
    }
  };
  assign(0);
  std::sort(group.begin(), group.end(), [](const LatticeSymmetry& a, const LatticeSymmetry& b) {
    bool ia = a.matrix == IntMatrix::Identity(a.matrix.rows(), a.matrix.cols());
    bool ib = b.matrix == IntMatrix::Identity(b.matrix.rows(), b.matrix.cols());
    if (ia != ib) return ia;
    return std::lexicographical_compare(a.matrix.data(), a.matrix.data() + a.matrix.size(), b.matrix.data(),
                                        b.matrix.data() + b.matrix.size());
  });
  return group;
}

/// Characters m with <m, b> = -1 for exactly one ray and >= 0 for the others.
/// Every root has -m in Delta, so L(Delta) and its negative bound the search.
inline std::vector<DemazureRoot> demazure_roots(const FanoPolytope& fp) {
  const auto& rays = fp.fan.rays;
  std::set<LatticeVector> pool;
  for (const auto& m : fp.polytope.lattice_points()) {
    pool.insert(m);
    pool.insert(-m);
  }
  std::vector<DemazureRoot> roots;
  for (const auto& m : pool) {
    std::size_t minus_one = 0, hit = 0;
    bool ok = true;
    for (std::size_t r = 0; r < rays.size() && ok; ++r) {
      auto v = dot(m, rays[r]);
      if (v == -1) {
        ++minus_one;
        hit = r;
      } else if (v < 0) {
        ok = false;
      }
    }
    if (ok && minus_one == 1) roots.push_back({m, hit});
  }
  return roots;
}

/// Self-intersection d of each torus-invariant curve of a toric surface,
/// from b_prev + b_next = -d * b. Indexed by ray id.
inline std::vector<int> self_intersections(const Fan& fan) {
  if (fan.dim != 2) throw Error(ErrorKind::DimensionUnsupported, "self-intersections need a 2-dimensional fan");
  const std::size_t m = fan.rays.size();
  std::vector<int> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& prev = fan.rays[(i + m - 1) % m];
    const auto& next = fan.rays[(i + 1) % m];
    const auto& b = fan.rays[i];
    auto sum = prev + next;
    const std::size_t c = b[0] != 0 ? 0 : 1;
    auto d = -sum[c] / b[c];
    if (sum[0] != -d * b[0] || sum[1] != -d * b[1])
      throw Error(ErrorKind::NotSmooth, "ray " + b.to_string() + " has non-unimodular neighbours");
    out[i] = static_cast<int>(d);
  }
  return out;
}

inline Rational simplex_volume(const Simplex& s) {
  const std::size_t n = s.vertices.size() - 1;
  RationalMatrix m;
  for (std::size_t i = 1; i <= n; ++i) {
    RationalVector d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = s.vertices[i][j] - s.vertices[0][j];
    m.push_back(std::move(d));
  }
  Rational det = exact::determinant(m);
  if (det < 0) det = -det;
  Rational fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= k;
  return det / fact;
}

/// Exact volume and barycenter from the stored triangulation.
inline Moments exact_moments(const ReflexivePolytope& p) {
  const std::size_t n = p.dim();
  Moments out{0, RationalVector(n, Rational(0))};
  for (const auto& s : p.simplices()) {
    Rational vol = simplex_volume(s);
    out.volume += vol;
    for (const auto& v : s.vertices)
      for (std::size_t i = 0; i < n; ++i) out.barycenter[i] += vol * v[i] / Rational(n + 1);
  }
  for (auto& c : out.barycenter) c /= out.volume;
  return out;
}

/// Range of y -> <y, xi> over Delta, attained at vertices.
inline SupportRange support_range(const ReflexivePolytope& p, const Eigen::VectorXd& xi) {
  SupportRange out;
  const auto& verts = p.vertices();
  std::vector<double> vals;
  for (const auto& v : verts) vals.push_back(v.to_eigen().dot(xi));
  out.min = *std::min_element(vals.begin(), vals.end());
  out.max = *std::max_element(vals.begin(), vals.end());
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] == out.min) out.argmin.push_back(k);
    if (vals[k] == out.max) out.argmax.push_back(k);
  }
  return out;
}

}  // namespace torickems
