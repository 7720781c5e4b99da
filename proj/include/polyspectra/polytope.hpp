#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/linalg.hpp"

namespace polyspectra {

struct face {
  std::vector<int> vertices;  // index cycle (d=2: segment endpoints, d=3: planar polygon, d>=4: simplex)
  vecd normal;                // outward unit normal
  double measure = 0.0;       // (d-1)-dimensional surface measure
  double offset = 0.0;        // <x, normal> for x on the face hyperplane
};

struct simplex {
  std::vector<int> vertices;  // d+1 vertex indices
  double signed_volume = 0.0;
  std::vector<double> inverse;  // d x d row-major inverse of the edge matrix (barycentric solve)
};

struct polytope {
  int dimension = 0;
  std::string name;
  std::vector<vecd> vertices;
  std::vector<face> faces;
  std::vector<simplex> simplices;
  double volume = 0.0;
  double scale_factor = 1.0;  // accumulated isotropic rescaling (volume normalization etc.)
};

inline double simplex_signed_volume(const std::vector<vecd>& pts) {
  int d = static_cast<int>(pts.size()) - 1;
  std::vector<double> m(d * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m[i * d + j] = pts[j + 1][i] - pts[0][i];
  double dt = det(std::move(m), d);
  double fact = 1.0;
  for (int k = 2; k <= d; ++k) fact *= k;
  return dt / fact;
}

inline double diameter(const polytope& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
      m = std::max(m, dist(p.vertices[i], p.vertices[j]));
  return m;
}

inline vecd face_centroid(const polytope& p, const face& f) {
  vecd c(p.dimension, 0.0);
  for (int idx : f.vertices)
    for (int i = 0; i < p.dimension; ++i) c[i] += p.vertices[idx][i];
  for (auto& x : c) x /= static_cast<double>(f.vertices.size());
  return c;
}

// Splits a face into (d-1)-simplices (vertex index tuples of size d): fan
// triangulation of the stored cycle. Faces of 1- and 2-dimensional bodies and
// simplex faces pass through unchanged.
inline std::vector<std::vector<int>> face_simplices(const polytope& p, const face& f) {
  int d = p.dimension;
  std::vector<std::vector<int>> out;
  if (d == 1 || static_cast<int>(f.vertices.size()) == d) {
    out.push_back(f.vertices);
    return out;
  }
  for (std::size_t i = 1; i + 1 < f.vertices.size(); ++i)
    out.push_back({f.vertices[0], f.vertices[i], f.vertices[i + 1]});
  return out;
}

// (d-1)-measure of a (d-1)-simplex given by d points in R^d, via the Gram determinant.
inline double facet_simplex_measure(const std::vector<vecd>& pts) {
  int k = static_cast<int>(pts.size()) - 1;
  if (k == 0) return 1.0;  // 0-dimensional face of an interval: counting measure
  std::vector<vecd> edges;
  for (int j = 1; j <= k; ++j) edges.push_back(sub(pts[j], pts[0]));
  double g = gram_det(edges);
  if (g < 0) g = 0;
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(g) / fact;
}

namespace detail {

// Unit normal of the affine hull of a face, sign unresolved. Checks planarity.
inline vecd face_unit_normal(const polytope& p, const std::vector<int>& cyc, double scale) {
  int d = p.dimension;
  if (static_cast<int>(cyc.size()) < d)
    throw validation_error("DegenerateFace", "face needs at least d vertices");
  vecd n(d, 0.0);
  if (d == 1) {
    n[0] = 1.0;
    return n;
  }
  if (d == 2) {
    vecd e = sub(p.vertices[cyc[1]], p.vertices[cyc[0]]);
    double len = norm(e);
    if (len < 1e-12 * scale) throw validation_error("DegenerateFace", "zero-length edge");
    n[0] = e[1] / len;
    n[1] = -e[0] / len;
    return n;
  }
  if (d == 3) {
    // Newell normal over the polygon cycle.
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const vecd& a = p.vertices[cyc[i]];
      const vecd& b = p.vertices[cyc[(i + 1) % cyc.size()]];
      n[0] += (a[1] - b[1]) * (a[2] + b[2]);
      n[1] += (a[2] - b[2]) * (a[0] + b[0]);
      n[2] += (a[0] - b[0]) * (a[1] + b[1]);
    }
  } else {
    // d >= 4: face must be a (d-1)-simplex; normal via cofactor expansion of the
    // (d-1) x d edge matrix (generalized cross product).
    if (static_cast<int>(cyc.size()) != d)
      throw validation_error("DegenerateFace", "faces in dimension >= 4 must be (d-1)-simplices");
    std::vector<vecd> edges;
    for (int j = 1; j < d; ++j) edges.push_back(sub(p.vertices[cyc[j]], p.vertices[cyc[0]]));
    for (int i = 0; i < d; ++i) {
      std::vector<double> minor((d - 1) * (d - 1));
      for (int r = 0; r < d - 1; ++r) {
        int cc = 0;
        for (int c = 0; c < d; ++c) {
          if (c == i) continue;
          minor[r * (d - 1) + cc++] = edges[r][c];
        }
      }
      n[i] = ((i % 2) ? -1.0 : 1.0) * det(std::move(minor), d - 1);
    }
  }
  double len = norm(n);
  if (len < 1e-12 * scale) throw validation_error("DegenerateFace", "face has no well-defined normal");
  for (auto& x : n) x /= len;
  // Planarity: every cycle vertex must sit on the affine hyperplane.
  double off = dot(p.vertices[cyc[0]], n);
  for (int idx : cyc)
    if (std::abs(dot(p.vertices[idx], n) - off) > tol::planar * std::max(1.0, scale))
      throw validation_error("NonPlanarFace", "face vertex off the face hyperplane");
  return n;
}

inline double face_measure(const polytope& p, const face& f) {
  double m = 0.0;
  for (const auto& cell : face_simplices(p, f)) {
    std::vector<vecd> pts;
    for (int idx : cell) pts.push_back(p.vertices[idx]);
    m += facet_simplex_measure(pts);
  }
  return m;
}

inline std::vector<double> simplex_inverse(const polytope& p, const std::vector<int>& vs) {
  int d = p.dimension;
  std::vector<double> a(d * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) a[i * d + j] = p.vertices[vs[j + 1]][i] - p.vertices[vs[0]][i];
  // invert column by column
  std::vector<double> inv(d * d);
  for (int col = 0; col < d; ++col) {
    vecd e(d, 0.0);
    e[col] = 1.0;
    vecd x = solve(a, e, d);
    for (int r = 0; r < d; ++r) inv[r * d + col] = x[r];
  }
  return inv;
}

}  // namespace detail

// Barycentric coordinates (u_1..u_d, with u_0 = 1 - sum) of x in simplex s.
inline void barycentric(const polytope& p, const simplex& s, std::span<const double> x,
                        std::span<double> u) {
  int d = p.dimension;
  const vecd& v0 = p.vertices[s.vertices[0]];
  for (int r = 0; r < d; ++r) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += s.inverse[r * d + c] * (x[c] - v0[c]);
    u[r] = acc;
  }
}

inline bool point_in_simplex(const polytope& p, const simplex& s, std::span<const double> x,
                             double tolerance) {
  int d = p.dimension;
  std::array<double, 16> buf{};
  barycentric(p, s, x, std::span<double>(buf.data(), d));
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    if (buf[i] < -tolerance) return false;
    sum += buf[i];
  }
  return sum <= 1.0 + tolerance;
}

inline bool contains_point(const polytope& p, std::span<const double> x, double tolerance = 1e-12) {
  for (const auto& s : p.simplices)
    if (point_in_simplex(p, s, x, tolerance)) return true;
  return false;
}

// Volume by the divergence theorem: V = (1/d) sum_F sigma(F) <x_F, nu_F>.
inline double divergence_volume(const polytope& p) {
  double v = 0.0;
  for (const auto& f : p.faces) v += f.measure * dot(face_centroid(p, f), f.normal);
  return v / p.dimension;
}

// Geometry validation and derived-field construction. `verts`/`face_cycles` come from a
// document or a programmatic builder; `simplex_cycles` may be empty for convex input
// (fan decomposition is built) but is required for non-convex bodies.
inline polytope build_polytope(int dimension, std::string name, std::vector<vecd> verts,
                               std::vector<std::vector<int>> face_cycles,
                               std::vector<std::vector<int>> simplex_cycles = {},
                               const std::vector<vecd>* declared_normals = nullptr) {
  if (dimension < 1 || dimension > 15)
    throw validation_error("InconsistentDimension", "dimension must be in [1,15]");
  if (static_cast<int>(verts.size()) < dimension + 1)
    throw validation_error("DegenerateBody", "needs at least d+1 vertices");
  for (const auto& v : verts) {
    if (static_cast<int>(v.size()) != dimension)
      throw validation_error("InconsistentDimension", "vertex arity != dimension");
    for (double x : v)
      if (!std::isfinite(x)) throw validation_error("NonFiniteCoordinate", "vertex coordinate not finite");
  }
  polytope p;
  p.dimension = dimension;
  p.name = std::move(name);
  p.vertices = std::move(verts);

  double scale = std::max(1.0, diameter(p));
  auto check_index = [&](int idx, const char* code) {
    if (idx < 0 || idx >= static_cast<int>(p.vertices.size()))
      throw validation_error(code, "vertex index out of range");
  };

  if (face_cycles.empty()) throw validation_error("DegenerateBody", "no faces given");
  for (auto& cyc : face_cycles) {
    for (int idx : cyc) check_index(idx, "BadFaceIndex");
    face f;
    f.vertices = cyc;
    f.normal = detail::face_unit_normal(p, cyc, scale);
    f.offset = 0.0;
    for (int idx : cyc) f.offset += dot(p.vertices[idx], f.normal);
    f.offset /= static_cast<double>(cyc.size());
    f.measure = detail::face_measure(p, f);
    if (f.measure < 1e-12 * std::pow(scale, p.dimension - 1))
      throw validation_error("DegenerateFace", "face has zero measure");
    p.faces.push_back(std::move(f));
  }

  // Convexity (sign-free): every face hyperplane has all vertices on one side.
  bool convex = true;
  for (auto& f : p.faces) {
    int above = 0, below = 0;
    for (const auto& v : p.vertices) {
      double s = dot(v, f.normal) - f.offset;
      if (s > tol::planar * scale) ++above;
      if (s < -tol::planar * scale) ++below;
    }
    if (above > 0 && below > 0) {
      convex = false;
    } else if (above > 0) {
      // flip so that the body side is <= offset (outward normal for convex bodies)
      for (auto& x : f.normal) x = -x;
      f.offset = -f.offset;
    }
  }

  // Simplex decomposition: supplied, or fan for convex bodies.
  if (!simplex_cycles.empty()) {
    for (auto& vs : simplex_cycles) {
      if (static_cast<int>(vs.size()) != dimension + 1)
        throw validation_error("BadSimplexIndex", "simplex needs d+1 vertices");
      for (int idx : vs) check_index(idx, "BadSimplexIndex");
      simplex s;
      s.vertices = vs;
      std::vector<vecd> pts;
      for (int idx : vs) pts.push_back(p.vertices[idx]);
      s.signed_volume = simplex_signed_volume(pts);
      if (std::abs(s.signed_volume) < 1e-12 * std::pow(scale, p.dimension))
        throw validation_error("DegenerateSimplex", "simplex volume is zero");
      p.simplices.push_back(std::move(s));
    }
  } else {
    if (!convex)
      throw validation_error("NonConvexWithoutDecomposition",
                             "non-convex input requires an explicit simplex list");
    if (p.dimension == 1) {
      p.simplices.push_back({{0, 1}, 0.0, {}});
      std::vector<vecd> pts{p.vertices[0], p.vertices[1]};
      p.simplices.back().signed_volume = simplex_signed_volume(pts);
    } else if (p.dimension == 2) {
      // fan over the hull cycle (vertices sorted by angle about the centroid)
      vecd c(2, 0.0);
      for (const auto& v : p.vertices) { c[0] += v[0]; c[1] += v[1]; }
      c[0] /= p.vertices.size();
      c[1] /= p.vertices.size();
      std::vector<int> order(p.vertices.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::atan2(p.vertices[a][1] - c[1], p.vertices[a][0] - c[0]) <
               std::atan2(p.vertices[b][1] - c[1], p.vertices[b][0] - c[0]);
      });
      for (std::size_t i = 1; i + 1 < order.size(); ++i) {
        std::vector<int> vs{order[0], order[i], order[i + 1]};
        std::vector<vecd> pts{p.vertices[vs[0]], p.vertices[vs[1]], p.vertices[vs[2]]};
        double sv = simplex_signed_volume(pts);
        if (std::abs(sv) < 1e-12 * scale * scale) continue;  // collinear fan triangle
        p.simplices.push_back({vs, sv, {}});
      }
    } else {
      // cone from vertex 0 over triangulated faces that do not contain vertex 0
      for (const auto& f : p.faces) {
        if (std::find(f.vertices.begin(), f.vertices.end(), 0) != f.vertices.end()) continue;
        for (const auto& cell : face_simplices(p, f)) {
          std::vector<int> vs{0};
          vs.insert(vs.end(), cell.begin(), cell.end());
          std::vector<vecd> pts;
          for (int idx : vs) pts.push_back(p.vertices[idx]);
          double sv = simplex_signed_volume(pts);
          if (std::abs(sv) < 1e-12 * std::pow(scale, p.dimension)) continue;
          p.simplices.push_back({vs, sv, {}});
        }
      }
    }
    if (p.simplices.empty()) throw validation_error("DegenerateBody", "empty decomposition");
  }

  for (auto& s : p.simplices) s.inverse = detail::simplex_inverse(p, s.vertices);
  p.volume = 0.0;
  for (const auto& s : p.simplices) p.volume += std::abs(s.signed_volume);
  if (p.volume < 1e-12 * std::pow(scale, p.dimension))
    throw validation_error("DegenerateBody", "volume is zero");

  // Orient normals of non-convex bodies by an interior probe (convex ones are set above).
  if (!convex || !simplex_cycles.empty()) {
    double eps = 1e-6 * scale;
    for (auto& f : p.faces) {
      vecd c = face_centroid(p, f);
      vecd inside_pt(p.dimension), outside_pt(p.dimension);
      for (int i = 0; i < p.dimension; ++i) {
        inside_pt[i] = c[i] - eps * f.normal[i];
        outside_pt[i] = c[i] + eps * f.normal[i];
      }
      bool in_minus = contains_point(p, inside_pt, 1e-9);
      bool in_plus = contains_point(p, outside_pt, 1e-9);
      if (in_minus == in_plus)
        throw validation_error("FaceOrientationAmbiguous", "interior probe failed near a face");
      if (in_plus) {  // normal points into the body: flip
        for (auto& x : f.normal) x = -x;
        f.offset = -f.offset;
      }
    }
  }

  // Minkowski closure: the measure-weighted normals of a closed boundary cancel.
  {
    vecd closure(p.dimension, 0.0);
    for (const auto& f : p.faces)
      for (int i = 0; i < p.dimension; ++i) closure[i] += f.measure * f.normal[i];
    for (double c : closure)
      if (std::abs(c) > tol::closure * std::max(1.0, std::pow(scale, p.dimension - 1)))
        throw validation_error("ClosureViolation", "boundary does not close up");
  }

  // Volume cross-check via the divergence theorem (independent of the decomposition).
  {
    double dv = divergence_volume(p);
    if (std::abs(dv - p.volume) > tol::closure * std::max(1.0, std::pow(scale, p.dimension)))
      throw validation_error("VolumeMismatch", "simplex volume and boundary volume disagree");
  }

  // Overlap sampling: interior points of one simplex may not be interior to another.
  {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int d = p.dimension;
    for (std::size_t si = 0; si < p.simplices.size(); ++si) {
      for (int trial = 0; trial < 24; ++trial) {
        // random interior barycentric weights
        vecd w(d + 1);
        double tot = 0.0;
        for (auto& x : w) { x = 0.05 + unif(rng); tot += x; }
        vecd pt(d, 0.0);
        for (int j = 0; j <= d; ++j) {
          const vecd& v = p.vertices[p.simplices[si].vertices[j]];
          for (int i = 0; i < d; ++i) pt[i] += (w[j] / tot) * v[i];
        }
        for (std::size_t sj = 0; sj < p.simplices.size(); ++sj) {
          if (si == sj) continue;
          if (point_in_simplex(p, p.simplices[sj], pt, -1e-9))  // strictly interior
            throw validation_error("OverlappingSimplices", "decomposition cells overlap");
        }
      }
    }
  }

  if (declared_normals) {
    if (declared_normals->size() != p.faces.size())
      throw validation_error("NormalMismatch", "declared normal count != face count");
    for (std::size_t i = 0; i < p.faces.size(); ++i) {
      const vecd& n = (*declared_normals)[i];
      if (static_cast<int>(n.size()) != p.dimension)
        throw validation_error("InconsistentDimension", "declared normal arity");
      if (std::abs(norm(n) - 1.0) > tol::unit)
        throw validation_error("NonUnitNormal", "declared normal is not unit length");
      if (dist(n, p.faces[i].normal) > 1e-6)
        throw validation_error("NormalMismatch", "declared normal disagrees with geometry");
    }
  }
  return p;
}

// --- transforms ---------------------------------------------------------------------

inline polytope translated(const polytope& p, const vecd& shift) {
  polytope q = p;
  for (auto& v : q.vertices)
    for (int i = 0; i < q.dimension; ++i) v[i] += shift[i];
  for (auto& f : q.faces) f.offset += dot(shift, f.normal);
  return q;
}

inline polytope scaled_polytope(const polytope& p, double c) {
  if (!(c > 0)) throw validation_error("BadScale", "scale factor must be positive");
  polytope q = p;
  for (auto& v : q.vertices)
    for (auto& x : v) x *= c;
  double card = std::pow(c, q.dimension - 1);
  for (auto& f : q.faces) {
    f.offset *= c;
    f.measure *= card;
  }
  for (auto& s : q.simplices) {
    s.signed_volume *= std::pow(c, q.dimension);
    for (auto& x : s.inverse) x /= c;
  }
  q.volume *= std::pow(c, q.dimension);
  q.scale_factor *= c;
  return q;
}

// Rescales isotropically to unit volume; the factor applied is recorded in scale_factor.
inline polytope normalize_volume(const polytope& p) {
  return scaled_polytope(p, std::pow(p.volume, -1.0 / p.dimension));
}

inline polytope permuted_axes(const polytope& p, const std::vector<int>& perm) {
  polytope q = p;
  auto apply = [&](const vecd& v) {
    vecd r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[perm[i]];
    return r;
  };
  for (auto& v : q.vertices) v = apply(v);
  for (auto& f : q.faces) f.normal = apply(f.normal);
  for (auto& s : q.simplices) {
    std::vector<vecd> pts;
    for (int idx : s.vertices) pts.push_back(q.vertices[idx]);
    s.signed_volume = simplex_signed_volume(pts);
    s.inverse = detail::simplex_inverse(q, s.vertices);
  }
  return q;
}

// --- direction analysis -------------------------------------------------------------

struct direction_face {
  int face_index = -1;
  int sign = 0;        // +1 if nu = +xi, -1 if nu = -xi
  double measure = 0.0;
  double offset = 0.0;  // <x, xi> on the face
};

struct direction_summary {
  vecd xi;
  std::vector<direction_face> faces;  // faces orthogonal to xi (nu = +-xi)
  double imbalance = 0.0;             // sum of sign * measure
  bool near_parallel_warning = false; // some face is nearly but not exactly aligned
};

inline direction_summary direction_report(const polytope& p, const vecd& xi) {
  if (static_cast<int>(xi.size()) != p.dimension)
    throw validation_error("InconsistentDimension", "direction arity != dimension");
  if (std::abs(norm(xi) - 1.0) > tol::unit)
    throw validation_error("NonUnitDirection", "direction must be a unit vector");
  direction_summary r;
  r.xi = xi;
  for (std::size_t i = 0; i < p.faces.size(); ++i) {
    const face& f = p.faces[i];
    double c = dot(f.normal, xi);
    double a = std::abs(c);
    if (a >= 1.0 - tol::align) {
      direction_face df;
      df.face_index = static_cast<int>(i);
      df.sign = c > 0 ? 1 : -1;
      df.measure = f.measure;
      df.offset = dot(face_centroid(p, f), xi);
      r.imbalance += df.sign * df.measure;
      r.faces.push_back(df);
    } else if (a > 1.0 - 1e-6) {
      r.near_parallel_warning = true;
    }
  }
  return r;
}

struct applicability {
  bool applicable = false;
  double imbalance = 0.0;
};

// The nonzero-imbalance criterion: an unbalanced direction certifies the body
// cannot carry an orthonormal exponential basis.
inline applicability is_theorem1_applicable(const polytope& p, const vecd& xi) {
  double imbalance = direction_report(p, xi).imbalance;
  return {std::abs(imbalance) > tol::imbalance, imbalance};
}

}  // namespace polyspectra
