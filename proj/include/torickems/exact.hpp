#pragma once

// Exact integer/rational vectors and the small amount of rational linear
// algebra the combinatorial modules need (ranks, null spaces, solves).

#include <algorithm>
#include <compare>
#include <functional>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "torickems/errors.hpp"

namespace torickems {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer point of M or N; which lattice is meant is fixed by context.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  LatticeVector(std::initializer_list<std::int64_t> coords) : coords_(coords) {}
  explicit LatticeVector(std::size_t dim) : coords_(dim, 0) {}

  std::size_t size() const noexcept { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }
  const std::vector<std::int64_t>& coords() const noexcept { return coords_; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
  }

  bool is_primitive() const {
    std::int64_t g = 0;
    for (auto c : coords_) g = std::gcd(g, c);
    return g == 1;
  }

  LatticeVector operator-() const {
    LatticeVector out(*this);
    for (auto& c : out.coords_) c = -c;
    return out;
  }

  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.coords_[i] += b[i];
    return a;
  }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.coords_[i] -= b[i];
    return a;
  }

  friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

  Eigen::VectorXd to_eigen() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v[static_cast<Eigen::Index>(i)] = static_cast<double>(coords_[i]);
    return v;
  }

  /// "(a,b,...)" with no spaces; used verbatim inside face ids.
  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<std::int64_t> coords_;
};

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline std::int64_t dot(const LatticeVector& a, const LatticeVector& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RationalVector& a, const LatticeVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RationalVector to_rational(const LatticeVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (auto c : v) out.emplace_back(c);
  return out;
}

inline Eigen::VectorXd to_eigen(const RationalVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].convert_to<double>();
  return out;
}

inline bool is_integral(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

inline bool is_integral(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return is_integral(r); });
}

inline LatticeVector to_lattice(const RationalVector& v) {
  LatticeVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integral(v[i])) throw Error(ErrorKind::InvalidInput, "non-integral coordinate");
    out[i] = boost::multiprecision::numerator(v[i]).convert_to<std::int64_t>();
  }
  return out;
}

/// Smallest positive integer multiple of v with coprime entries (v must be nonzero).
inline LatticeVector primitive_multiple(const RationalVector& v) {
  Integer lcm = 1;
  for (const auto& r : v) lcm = boost::multiprecision::lcm(lcm, Integer(boost::multiprecision::denominator(r)));
  std::vector<Integer> scaled;
  Integer g = 0;
  for (const auto& r : v) {
    Integer s = boost::multiprecision::numerator(r) * (lcm / boost::multiprecision::denominator(r));
    g = boost::multiprecision::gcd(g, s);
    scaled.push_back(s);
  }
  if (g == 0) throw Error(ErrorKind::InvalidInput, "zero vector has no primitive multiple");
  LatticeVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Integer(scaled[i] / g).convert_to<std::int64_t>();
  return out;
}

namespace exact {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RationalMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = 0; c < a[r].size(); ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix a, std::size_t cols) { return rref(a, cols).size(); }

/// Basis of {x : a x = 0} for a with the given column count.
inline std::vector<RationalVector> nullspace(RationalMatrix a, std::size_t cols) {
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a[sel][col] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap(a[sel], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

/// Unique solution of the square system a x = b, or nullopt when singular.
inline std::optional<RationalVector> solve(RationalMatrix a, const RationalVector& b) {
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < n; ++r) a[r].push_back(b[r]);
  auto pivots = rref(a, n);
  if (pivots.size() < n) return std::nullopt;
  RationalVector x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n];
  return x;
}

inline RationalMatrix from_lattice_rows(const std::vector<LatticeVector>& rows) {
  RationalMatrix m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.push_back(to_rational(r));
  return m;
}

inline std::int64_t integer_determinant(const std::vector<LatticeVector>& rows) {
  Rational d = determinant(from_lattice_rows(rows));
  return boost::multiprecision::numerator(d).convert_to<std::int64_t>();
}

/// Generators of the polyhedral cone {z : <row, z> <= 0 for every row}.
/// `lineality` spans the largest linear subspace; `rays` are the extreme rays
/// of the pointed part orthogonal to it. Exhaustive over row subsets, so only
/// meant for the tiny dimensions used here.
struct ConeGenerators {
  std::vector<RationalVector> lineality;
  std::vector<RationalVector> rays;
};

inline ConeGenerators cone_generators(const RationalMatrix& rows, std::size_t dim) {
  ConeGenerators out;
  out.lineality = nullspace(rows, dim);
  const std::size_t lin = out.lineality.size();
  if (lin == dim) return out;
  const std::size_t pointed_dim = dim - lin;
  const std::size_t need = pointed_dim - 1;

  auto satisfies = [&](const RationalVector& z) {
    return std::all_of(rows.begin(), rows.end(), [&](const RationalVector& r) { return dot(r, z) <= 0; });
  };
  auto add_ray = [&](const RationalVector& z) {
    LatticeVector p = primitive_multiple(z);
    RationalVector pz = to_rational(p);
    if (std::find(out.rays.begin(), out.rays.end(), pz) == out.rays.end()) out.rays.push_back(std::move(pz));
  };

  std::vector<std::size_t> pick(need);
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t start, std::size_t depth) {
    if (depth == need) {
      RationalMatrix sys = out.lineality;
      for (auto i : pick) sys.push_back(rows[i]);
      auto ns = nullspace(sys, dim);
      if (ns.size() != 1) return;
      RationalVector d = ns[0];
      if (satisfies(d)) add_ray(d);
      for (auto& x : d) x = -x;
      if (satisfies(d)) add_ray(d);
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  recurse(0, 0);
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

}  // namespace exact
}  // namespace torickems
