#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/face_wave.hpp"
#include "polyspectra/linalg.hpp"
#include "polyspectra/polytope.hpp"

namespace polyspectra {
namespace detail {

inline constexpr int max_dd_nodes = 18;

inline constexpr std::array<double, 32> factorials = [] {
  std::array<double, 32> f{};
  f[0] = 1.0;
  for (int i = 1; i < 32; ++i) f[i] = f[i - 1] * i;
  return f;
}();

// (-i)^q and i^q.
inline cplx neg_i_pow(int q) {
  switch (q & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}
inline cplx i_pow(int q) {
  switch (q & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Divided difference of theta -> exp(-i theta) over a node cluster of small spread:
// centered series  exp(-i c) * sum_p (-i)^{m+p}/(m+p)! h_p(delta),  h_p the complete
// homogeneous symmetric polynomials of the centered nodes. Converges fast for spreads
// below the switch threshold; truncation order 12 leaves no residual at double precision.
inline cplx ddexp_series(const double* th, int count) {
  constexpr int order = 12;
  int m = count - 1;
  double c = 0.0;
  for (int i = 0; i < count; ++i) c += th[i];
  c /= count;
  double h[order + 1] = {1.0};
  for (int i = 0; i < count; ++i) {
    double delta = th[i] - c;
    for (int p = 1; p <= order; ++p) h[p] += delta * h[p - 1];
  }
  cplx s = 0.0;
  for (int p = 0; p <= order; ++p) s += neg_i_pow(m + p) / factorials[m + p] * h[p];
  return cplx(std::cos(c), -std::sin(c)) * s;
}

// Confluent divided difference of exp(-i theta): recurrence between well-separated
// nodes, centered series inside clusters (handles repeated nodes exactly).
inline cplx ddexp(const double* nodes, int n) {
  const double switch_theta = 2.0 * pi * tol::series_switch;
  std::array<double, max_dd_nodes> th;
  std::copy(nodes, nodes + n, th.begin());
  std::sort(th.begin(), th.begin() + n);
  std::array<cplx, max_dd_nodes> prev, cur;
  for (int j = 0; j < n; ++j) prev[j] = cplx(std::cos(th[j]), -std::sin(th[j]));
  for (int len = 1; len < n; ++len) {
    for (int j = 0; j + len < n; ++j) {
      int k = j + len;
      double spread = th[k] - th[j];
      if (spread < switch_theta)
        cur[j] = ddexp_series(th.data() + j, len + 1);
      else
        cur[j] = (prev[j + 1] - prev[j]) / spread;
    }
    std::swap(prev, cur);
  }
  return prev[0];
}

inline void vertex_phases(const polytope& p, const std::vector<int>& idx,
                          std::span<const double> eta, double* th) {
  for (std::size_t j = 0; j < idx.size(); ++j)
    th[j] = 2.0 * pi * dot(p.vertices[idx[j]], eta);
}

}  // namespace detail

struct ft_value {
  vecd eta;
  cplx value;
};

// Exact transform  integral over the body of exp(-2 pi i <x, eta>) dx,  assembled from
// the closed-form simplex transform  d! vol(T) i^d dd[exp(-i .)](theta_0..theta_d),
// theta_j = 2 pi <v_j, eta>.
inline cplx ft_exact(const polytope& p, std::span<const double> eta) {
  int d = p.dimension;
  const cplx id = detail::i_pow(d);
  const double fd = detail::factorials[d];
  double th[detail::max_dd_nodes];
  cplx total = 0.0;
  for (const auto& s : p.simplices) {
    detail::vertex_phases(p, s.vertices, eta, th);
    total += fd * std::abs(s.signed_volume) * id * detail::ddexp(th, d + 1);
  }
  return total;
}

// Same transform via the divergence theorem:
//   -(1 / (2 pi i |eta|)) * integral over the boundary of exp(-2 pi i <x,eta>) <eta/|eta|, nu> dsigma,
// each face reduced to closed-form (d-1)-simplex transforms. Requires eta != 0.
inline cplx ft_boundary(const polytope& p, std::span<const double> eta) {
  double r = norm(eta);
  if (!(r > 0.0)) throw validation_error("ZeroFrequency", "boundary form needs eta != 0");
  int d = p.dimension;
  const cplx id1 = detail::i_pow(d - 1);
  const double fd1 = detail::factorials[d - 1];
  double th[detail::max_dd_nodes];
  cplx acc = 0.0;
  for (const auto& f : p.faces) {
    double align = dot(f.normal, eta) / r;
    if (std::abs(align) < 1e-17) continue;
    cplx face_sum = 0.0;
    for (const auto& cell : face_simplices(p, f)) {
      std::vector<vecd> pts;
      pts.reserve(cell.size());
      for (int idx : cell) pts.push_back(p.vertices[idx]);
      double area = facet_simplex_measure(pts);
      detail::vertex_phases(p, cell, eta, th);
      face_sum += fd1 * area * id1 * detail::ddexp(th, static_cast<int>(cell.size()));
    }
    acc += align * face_sum;
  }
  return acc * cplx(0.0, 1.0) / (2.0 * pi * r);
}

// Gradient of the transform: component m is -2 pi i times the first-moment transform,
// computed from divided differences with one repeated node per vertex.
inline std::vector<cplx> ft_gradient(const polytope& p, std::span<const double> eta) {
  int d = p.dimension;
  const cplx id1 = detail::i_pow(d + 1);
  const double fd = detail::factorials[d];
  double th[detail::max_dd_nodes];
  std::vector<cplx> moment(d, cplx(0.0, 0.0));
  for (const auto& s : p.simplices) {
    detail::vertex_phases(p, s.vertices, eta, th);
    double w = fd * std::abs(s.signed_volume);
    for (int j = 0; j <= d; ++j) {
      th[d + 1] = th[j];
      cplx ddj = w * id1 * detail::ddexp(th, d + 2);
      const vecd& vj = p.vertices[s.vertices[j]];
      for (int m = 0; m < d; ++m) moment[m] += ddj * vj[m];
    }
  }
  for (auto& g : moment) g *= cplx(0.0, -2.0 * pi);
  return moment;
}

// Sampled estimate of the gradient-decay constant: sup over |eta| in [1, t_max] of
// |eta| * |grad FT(eta)|, inflated by the safety factor. Non-rigorous by construction.
struct grad_bound_estimate {
  double value = 0.0;         // safety_factor * observed_sup
  double observed_sup = 0.0;
  double safety_factor = tol::safety_factor;
  int samples = 0;
  double t_max = 0.0;
  std::uint64_t seed = 0;
  vecd argmax;
};

inline grad_bound_estimate estimate_grad_constant(const polytope& p, double t_max = 50.0,
                                                  int samples = 10000,
                                                  std::uint64_t seed = 20010114) {
  if (samples <= 0 || !(t_max >= 1.0))
    throw validation_error("BadSampleSpec", "need samples > 0 and t_max >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(1.0, t_max);
  grad_bound_estimate est;
  est.samples = samples;
  est.t_max = t_max;
  est.seed = seed;
  int d = p.dimension;
  vecd eta(d);
  for (int s = 0; s < samples; ++s) {
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < d; ++i) {
        eta[i] = gauss(rng);
        n2 += eta[i] * eta[i];
      }
    } while (n2 < 1e-12);
    double r = radius(rng) / std::sqrt(n2);
    for (auto& x : eta) x *= r;
    auto g = ft_gradient(p, eta);
    double gn = 0.0;
    for (const auto& c : g) gn += std::norm(c);
    double val = norm(eta) * std::sqrt(gn);
    if (val > est.observed_sup) {
      est.observed_sup = val;
      est.argmax = eta;
    }
  }
  est.value = est.safety_factor * est.observed_sup;
  return est;
}

// Radial profile along t -> FT(t xi) against the leading boundary term
// -f(t) / (2 pi i t), f the (unnormalized) face wave of the direction.
struct slice_sample {
  double t = 0.0;
  cplx value;
  cplx leading;
  cplx residual;
};

struct slice_data {
  vecd xi;
  double t_min = 0.0, t_max = 0.0, step = 0.0;
  std::vector<slice_sample> samples;
  double k3_observed = 0.0;  // sup over samples of t^2 |residual|
  double k3_at = 0.0;
  face_wave wave;  // unnormalized terms used for the leading part
};

inline slice_data slice_profile(const polytope& p, const vecd& xi, double t_min = 1.0,
                                double t_max = 100.0, double step = 0.01) {
  if (!(t_min > 0.0) || !(t_max > t_min) || !(step > 0.0))
    throw validation_error("BadRange", "slice needs 0 < t_min < t_max and step > 0");
  slice_data out;
  out.xi = xi;
  out.t_min = t_min;
  out.t_max = t_max;
  out.step = step;
  out.wave = make_face_wave(direction_report(p, xi), false);
  vecd eta(p.dimension);
  long long steps = static_cast<long long>(std::floor((t_max - t_min) / step + 1e-12));
  out.samples.reserve(steps + 1);
  for (long long k = 0; k <= steps; ++k) {
    double t = t_min + k * step;
    for (int i = 0; i < p.dimension; ++i) eta[i] = t * xi[i];
    slice_sample s;
    s.t = t;
    s.value = ft_exact(p, eta);
    s.leading = -eval_wave(out.wave, t) / (cplx(0.0, 2.0 * pi) * t);
    s.residual = s.value - s.leading;
    double score = t * t * std::abs(s.residual);
    if (score > out.k3_observed) {
      out.k3_observed = score;
      out.k3_at = t;
    }
    out.samples.push_back(s);
  }
  return out;
}

}  // namespace polyspectra
