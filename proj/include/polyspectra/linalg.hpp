#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "polyspectra/common.hpp"

namespace polyspectra {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline vecd sub(std::span<const double> a, std::span<const double> b) {
  vecd r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline vecd add(std::span<const double> a, std::span<const double> b) {
  vecd r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline vecd scaled(std::span<const double> a, double c) {
  vecd r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Determinant of an n x n matrix (row-major), Gaussian elimination with partial pivoting.
inline double det(std::vector<double> m, int n) {
  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    if (m[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      sign = -sign;
    }
    for (int r = col + 1; r < n; ++r) {
      double f = m[r * n + col] / m[col * n + col];
      for (int c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  double d = sign;
  for (int i = 0; i < n; ++i) d *= m[i * n + i];
  return d;
}

// Solve A x = b for square A (row-major), partial pivoting. Throws on (near-)singular A.
inline vecd solve(std::vector<double> a, vecd b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-300) throw numeric_error("singular linear system");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / a[col * n + col];
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  vecd x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return x;
}

// Gram determinant of k column vectors in R^d: det(B^T B).
inline double gram_det(const std::vector<vecd>& cols) {
  int k = static_cast<int>(cols.size());
  std::vector<double> g(k * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g[i * k + j] = dot(cols[i], cols[j]);
  return det(std::move(g), k);
}

// Orthonormal basis of R^d whose last vector is the given unit direction; the first
// d-1 vectors span the orthogonal complement. Deterministic (Gram-Schmidt against
// coordinate axes); exact signed-permutation frame when xi is a signed axis vector.
inline std::vector<vecd> complete_frame(const vecd& xi) {
  int d = static_cast<int>(xi.size());
  std::vector<vecd> basis;
  basis.reserve(d);
  for (int axis = 0; axis < d && static_cast<int>(basis.size()) < d - 1; ++axis) {
    vecd v(d, 0.0);
    v[axis] = 1.0;
    double c = dot(v, xi);
    for (int i = 0; i < d; ++i) v[i] -= c * xi[i];
    for (const auto& b : basis) {
      double cb = dot(v, b);
      for (int i = 0; i < d; ++i) v[i] -= cb * b[i];
    }
    double n = norm(v);
    if (n > 1e-7) {
      for (auto& x : v) x /= n;
      basis.push_back(std::move(v));
    }
  }
  if (static_cast<int>(basis.size()) != d - 1) throw numeric_error("could not complete frame");
  basis.push_back(xi);
  return basis;
}

}  // namespace polyspectra
