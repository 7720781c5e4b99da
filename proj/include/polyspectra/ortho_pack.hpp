#pragma once

// Empirical exponential-orthogonality machinery: locate zeros of the indicator
// transform, greedily grow windowed sets of pairwise-orthogonal frequencies,
// estimate their density, and probe the squared-transform tiling identity that
// characterizes spectra of volume-1 bodies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/fourier.hpp"
#include "polyspectra/linalg.hpp"
#include "polyspectra/polytope.hpp"

namespace polyspectra {

// Axis-aligned box, the shared window/region type for packs, density windows,
// tiling regions, and zero scans.
struct box {
  vecd lo;
  vecd hi;

  int dimension() const { return static_cast<int>(lo.size()); }

  bool contains(const vecd& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  double side(int axis) const { return hi[axis] - lo[axis]; }

  double min_side() const {
    double m = side(0);
    for (int i = 1; i < dimension(); ++i) m = std::min(m, side(i));
    return m;
  }

  bool empty() const {
    for (int i = 0; i < dimension(); ++i)
      if (hi[i] <= lo[i]) return true;
    return false;
  }
};

inline box cube_window(int dimension, double lo, double hi) {
  return box{vecd(dimension, lo), vecd(dimension, hi)};
}

// Finite candidate frequency set with provenance.
struct point_set {
  int dimension = 0;
  std::vector<vecd> points;
  std::string provenance = "user-supplied";  // lattice | greedy-packing | user-supplied
  std::uint64_t seed = 0;
};

// Lattice points of `diag(spacing) * Z^d` inside the window (inclusive bounds);
// per-axis spacings allow stretched lattices such as (1/2)Z x Z.
inline point_set lattice_points(const box& window, const vecd& spacing) {
  int d = window.dimension();
  if (static_cast<int>(spacing.size()) != d)
    throw validation_error("InconsistentDimension", "one lattice spacing per axis required");
  for (double s : spacing)
    if (!(s > 0.0)) throw validation_error("BadSpacing", "lattice spacings must be positive");
  point_set out;
  out.dimension = d;
  out.provenance = "lattice";
  std::vector<long long> idx(d), first(d), last(d);
  for (int i = 0; i < d; ++i) {
    first[i] = static_cast<long long>(std::ceil(window.lo[i] / spacing[i] - 1e-12));
    last[i] = static_cast<long long>(std::floor(window.hi[i] / spacing[i] + 1e-12));
    if (first[i] > last[i]) return out;
    idx[i] = first[i];
  }
  while (true) {
    vecd x(d);
    for (int i = 0; i < d; ++i) x[i] = spacing[i] * static_cast<double>(idx[i]);
    out.points.push_back(std::move(x));
    int carry = 0;
    while (carry < d && ++idx[carry] > last[carry]) {
      idx[carry] = first[carry];
      ++carry;
    }
    if (carry == d) break;
  }
  return out;
}

inline point_set lattice_points(const box& window, double spacing = 1.0) {
  return lattice_points(window, vecd(window.dimension(), spacing));
}

inline double min_pairwise_distance(const point_set& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i)
    for (std::size_t j = i + 1; j < s.points.size(); ++j)
      best = std::min(best, dist(s.points[i], s.points[j]));
  return best;
}

// Two exponentials e_lambda, e_mu are orthogonal over the body iff the transform
// vanishes at the frequency difference.
inline bool orthogonality_test(const polytope& p, const vecd& lambda, const vecd& mu) {
  vecd diff = sub(lambda, mu);
  if (norm(diff) == 0.0) throw validation_error("EqualFrequencies", "orthogonality_test requires lambda != mu");
  return std::abs(ft_exact(p, diff)) <= tol::zero;
}

struct ray_spec {
  vecd direction;  // need not be unit; normalized internally
  double t_min = 0.25;
  double t_max = 10.0;
  double step = 0.01;
};

struct window_spec {
  box window;
  double step = 0.05;
};

struct zero_set_probe {
  std::string spec;              // human-readable description of the scanned region
  std::vector<vecd> zeros;       // refined frequencies with |ft| <= tol::zero
  std::vector<double> residuals; // re-evaluated |ft| at each zero
  double r0 = 0.0;               // min modulus among located zeros
  bool r0_defined = false;
};

namespace detail {

// Gauss-Newton refinement of a zero of the complex-valued transform: the two real
// equations (Re, Im) in d unknowns are solved with the minimum-norm step
// s = J^T (J J^T)^{-1} F, a 2x2 solve in every dimension. Exact Jacobian from the
// closed-form gradient; step halving keeps |ft| monotone.
inline std::optional<vecd> refine_zero(const polytope& p, vecd eta) {
  cplx val = ft_exact(p, eta);
  int d = p.dimension;
  for (int iter = 0; iter < 60 && std::abs(val) > 1e-14; ++iter) {
    auto grad = ft_gradient(p, eta);
    // J J^T for J = [Re grad; Im grad] (rows), F = (Re val, Im val).
    double a = 0, b = 0, c = 0;
    for (int i = 0; i < d; ++i) {
      a += grad[i].real() * grad[i].real();
      b += grad[i].real() * grad[i].imag();
      c += grad[i].imag() * grad[i].imag();
    }
    double det2 = a * c - b * b;
    vecd step(d, 0.0);
    if (det2 > 1e-30 * (a + c) * (a + c)) {
      double y0 = (c * val.real() - b * val.imag()) / det2;
      double y1 = (a * val.imag() - b * val.real()) / det2;
      for (int i = 0; i < d; ++i) step[i] = grad[i].real() * y0 + grad[i].imag() * y1;
    } else if (a + c > 0) {
      // Rank-deficient Jacobian (e.g. purely real transform along a symmetry ray):
      // fall back to steepest descent on |ft|^2.
      double g2 = 0;
      for (int i = 0; i < d; ++i) {
        step[i] = grad[i].real() * val.real() + grad[i].imag() * val.imag();
        g2 += step[i] * step[i];
      }
      double scale = std::abs(val) * std::abs(val) / std::max(g2, 1e-300);
      for (auto& s : step) s *= scale;
    } else {
      break;
    }
    double shrink = 1.0;
    bool improved = false;
    for (int h = 0; h < 25; ++h) {
      vecd trial(d);
      for (int i = 0; i < d; ++i) trial[i] = eta[i] - shrink * step[i];
      cplx tv = ft_exact(p, trial);
      if (std::abs(tv) < std::abs(val)) {
        eta = std::move(trial);
        val = tv;
        improved = true;
        break;
      }
      shrink *= 0.5;
    }
    if (!improved) break;
  }
  if (std::abs(val) <= tol::zero) return eta;
  return std::nullopt;
}

inline void append_zero(const polytope& p, zero_set_probe& probe, const vecd& eta) {
  for (const auto& z : probe.zeros)
    if (dist(z, eta) < 1e-6) return;  // duplicate refinement target
  double check = std::abs(ft_exact(p, eta));  // independent re-evaluation
  if (check > tol::zero) return;
  probe.zeros.push_back(eta);
  probe.residuals.push_back(check);
  double r = norm(eta);
  if (!probe.r0_defined || r < probe.r0) {
    probe.r0 = r;
    probe.r0_defined = true;
  }
}

}  // namespace detail

// Scan |ft| along the ray t * direction and refine local minima below the coarse
// threshold down to verified zeros.
inline zero_set_probe probe_zeros(const polytope& p, const ray_spec& spec) {
  if (spec.step <= 0 || spec.t_max <= spec.t_min)
    throw validation_error("BadProbeSpec", "ray probe requires step > 0 and t_max > t_min");
  double dn = norm(spec.direction);
  if (dn <= 0) throw validation_error("BadProbeSpec", "ray direction must be nonzero");
  vecd u = scaled(spec.direction, 1.0 / dn);
  zero_set_probe probe;
  probe.spec = "ray";
  int n = static_cast<int>(std::floor((spec.t_max - spec.t_min) / spec.step + 1e-9)) + 1;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = std::abs(ft_exact(p, scaled(u, spec.t_min + i * spec.step)));
  for (int i = 0; i < n; ++i) {
    if (vals[i] >= tol::coarse) continue;
    if (i > 0 && vals[i - 1] < vals[i]) continue;
    if (i + 1 < n && vals[i + 1] < vals[i]) continue;
    auto refined = detail::refine_zero(p, scaled(u, spec.t_min + i * spec.step));
    if (refined) detail::append_zero(p, probe, *refined);
  }
  return probe;
}

// Scan |ft| on a grid over the window and refine grid-local minima below the
// coarse threshold.
inline zero_set_probe probe_zeros(const polytope& p, const window_spec& spec) {
  if (spec.step <= 0) throw validation_error("BadProbeSpec", "window probe requires step > 0");
  zero_set_probe probe;
  probe.spec = "window";
  int d = spec.window.dimension();
  if (spec.window.empty()) return probe;
  std::vector<int> counts(d);
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    counts[i] = static_cast<int>(std::floor(spec.window.side(i) / spec.step + 1e-9)) + 1;
    total *= counts[i];
  }
  std::vector<double> vals(static_cast<std::size_t>(total));
  std::vector<int> idx(d, 0);
  auto flat = [&](const std::vector<int>& ix) {
    long long f = 0;
    for (int i = d - 1; i >= 0; --i) f = f * counts[i] + ix[i];
    return static_cast<std::size_t>(f);
  };
  auto point_at = [&](const std::vector<int>& ix) {
    vecd x(d);
    for (int i = 0; i < d; ++i) x[i] = spec.window.lo[i] + ix[i] * spec.step;
    return x;
  };
  while (true) {
    vals[flat(idx)] = std::abs(ft_exact(p, point_at(idx)));
    int carry = 0;
    while (carry < d && ++idx[carry] == counts[carry]) idx[carry++] = 0;
    if (carry == d) break;
  }
  std::fill(idx.begin(), idx.end(), 0);
  while (true) {
    double v = vals[flat(idx)];
    if (v < tol::coarse) {
      bool is_min = true;
      for (int i = 0; i < d && is_min; ++i)
        for (int s = -1; s <= 1 && is_min; s += 2) {
          std::vector<int> nb = idx;
          nb[i] += s;
          if (nb[i] < 0 || nb[i] >= counts[i]) continue;
          if (vals[flat(nb)] < v) is_min = false;
        }
      if (is_min) {
        auto refined = detail::refine_zero(p, point_at(idx));
        if (refined) detail::append_zero(p, probe, *refined);
      }
    }
    int carry = 0;
    while (carry < d && ++idx[carry] == counts[carry]) idx[carry++] = 0;
    if (carry == d) break;
  }
  return probe;
}

// Greedy maximal pairwise-orthogonal set over a seeded shuffle of the candidate
// grid (step tol::pack_step). Order-dependent by construction; the seed is the
// reproducibility handle.
inline point_set greedy_orthogonal_pack(const polytope& p, const box& window, std::uint64_t seed) {
  int d = window.dimension();
  if (d != p.dimension)
    throw validation_error("InconsistentDimension", "pack window dimension differs from polytope");
  point_set out;
  out.dimension = d;
  out.provenance = "greedy-packing";
  out.seed = seed;
  if (window.empty()) return out;
  std::vector<int> counts(d);
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    counts[i] = static_cast<int>(std::floor(window.side(i) / tol::pack_step + 1e-9)) + 1;
    total *= counts[i];
  }
  std::vector<std::uint32_t> order(static_cast<std::size_t>(total));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  vecd x(d);
  for (std::uint32_t flat : order) {
    std::uint32_t rem = flat;
    for (int i = 0; i < d; ++i) {
      x[i] = window.lo[i] + static_cast<double>(rem % counts[i]) * tol::pack_step;
      rem /= counts[i];
    }
    bool ok = true;
    for (const auto& member : out.points) {
      if (!orthogonality_test(p, x, member)) {
        ok = false;
        break;
      }
    }
    if (ok) out.points.push_back(x);
  }
  return out;
}

struct density_sample {
  vecd center;
  double radius = 0.0;
  long long count = 0;
  double ball_volume = 0.0;
  double ratio = 0.0;
  bool clipped = false;  // ball not contained in the declared window
};

struct density_estimate {
  std::vector<density_sample> samples;
  double estimate = 0.0;       // mean ratio over unclipped centers at the largest radius
  double spread = 0.0;         // max - min ratio over those centers (uniformity diagnostic)
  double largest_radius = 0.0;
  int clipped_samples = 0;
};

inline double unit_ball_volume(int d) {
  return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Counting density estimate #(points in B_R(x)) / |B_R(x)| over a center/radius
// grid. Balls escaping the declared window are flagged as clipped and excluded
// from the headline estimate.
inline density_estimate estimate_density(const point_set& points, const std::vector<vecd>& centers,
                                         std::vector<double> radii, const box& window) {
  if (centers.empty() || radii.empty())
    throw validation_error("BadDensitySpec", "density estimate needs centers and radii");
  std::sort(radii.begin(), radii.end());
  density_estimate out;
  out.largest_radius = radii.back();
  int d = points.dimension;
  double ubv = unit_ball_volume(d);
  double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  int used = 0;
  for (const auto& c : centers) {
    for (double r : radii) {
      density_sample s;
      s.center = c;
      s.radius = r;
      for (int i = 0; i < d; ++i)
        if (c[i] - r < window.lo[i] - 1e-12 || c[i] + r > window.hi[i] + 1e-12) s.clipped = true;
      for (const auto& pnt : points.points)
        if (dist(pnt, c) <= r) ++s.count;
      s.ball_volume = ubv * std::pow(r, d);
      s.ratio = static_cast<double>(s.count) / s.ball_volume;
      if (s.clipped) ++out.clipped_samples;
      if (r == radii.back() && !s.clipped) {
        sum += s.ratio;
        lo = std::min(lo, s.ratio);
        hi = std::max(hi, s.ratio);
        ++used;
      }
      out.samples.push_back(std::move(s));
    }
  }
  if (used == 0)
    throw numeric_error("every ball at the largest radius exits the window; shrink radii or grow the window");
  out.estimate = sum / used;
  out.spread = hi - lo;
  return out;
}

struct spectral_probe_report {
  double target = 0.0;         // volume^2, the tiling level of the squared transform
  double max_deviation = 0.0;  // max |sum - target| over the evaluation grid
  vecd argmax;
  long long grid_points = 0;
  long long frequency_count = 0;
  double tail_radius = 0.0;     // guaranteed frequency coverage radius around the grid
  double tail_empirical = 0.0;  // outer-half-shell contribution actually present (non-rigorous proxy)
  double per_term_bound = 0.0;  // generic single-term bound (surface / (2 pi tail_radius))^2
  std::string tail_note;
};

// Evaluate sum over lambda of |ft(x - lambda)|^2 against volume^2 on a grid.
// The generic |ft(eta)| <= surface/(2 pi |eta|) decay is not square-summable over a
// density-1 set in d >= 2 (each doubling shell contributes a comparable amount), so
// no rigorous finite truncation bound exists at this level of generality; the report
// carries the empirical outer-shell contribution instead and fails when that proxy
// exceeds the requested tolerance.
inline spectral_probe_report spectral_pair_probe(const polytope& p, const point_set& freqs,
                                                 const window_spec& grid,
                                                 double tail_tolerance = 0.01) {
  int d = p.dimension;
  if (grid.window.dimension() != d || (freqs.dimension != d && !freqs.points.empty()))
    throw validation_error("InconsistentDimension", "probe grid/frequency dimension mismatch");
  spectral_probe_report rep;
  rep.target = p.volume * p.volume;
  rep.frequency_count = static_cast<long long>(freqs.points.size());
  double surface = 0.0;
  for (const auto& f : p.faces) surface += f.measure;

  // Coverage radius: distance from the evaluation grid to the nearest face of the
  // bounding box of the frequency set.
  if (!freqs.points.empty()) {
    box bb{freqs.points[0], freqs.points[0]};
    for (const auto& q : freqs.points)
      for (int i = 0; i < d; ++i) {
        bb.lo[i] = std::min(bb.lo[i], q[i]);
        bb.hi[i] = std::max(bb.hi[i], q[i]);
      }
    double cover = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      cover = std::min(cover, grid.window.lo[i] - bb.lo[i]);
      cover = std::min(cover, bb.hi[i] - grid.window.hi[i]);
    }
    rep.tail_radius = std::max(cover, 0.0);
    rep.per_term_bound = rep.tail_radius > 0
                             ? std::pow(surface / (2.0 * pi * rep.tail_radius), 2)
                             : std::numeric_limits<double>::infinity();
  }

  std::vector<int> counts(d);
  for (int i = 0; i < d; ++i)
    counts[i] = static_cast<int>(std::floor(grid.window.side(i) / grid.step + 1e-9)) + 1;
  std::vector<int> idx(d, 0);
  rep.argmax = vecd(d, 0.0);
  double half = 0.5 * rep.tail_radius;
  while (true) {
    vecd x(d);
    for (int i = 0; i < d; ++i) x[i] = grid.window.lo[i] + idx[i] * grid.step;
    double total = 0.0, shell = 0.0;
    for (const auto& q : freqs.points) {
      vecd diff = sub(x, q);
      double term = std::norm(ft_exact(p, diff));
      total += term;
      if (rep.tail_radius > 0 && norm(diff) >= half) shell += term;
    }
    ++rep.grid_points;
    double dev = std::abs(total - rep.target);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.argmax = x;
    }
    rep.tail_empirical = std::max(rep.tail_empirical, shell);
    int carry = 0;
    while (carry < d && ++idx[carry] == counts[carry]) idx[carry++] = 0;
    if (carry == d) break;
  }
  rep.tail_note =
      "tail figures are empirical: the generic decay bound is not square-summable in d >= 2, "
      "so the outer-half-shell sum stands in for the (nonexistent) rigorous truncation bound";
  if (rep.tail_empirical > tail_tolerance)
    throw numeric_error("outer-shell contribution " + std::to_string(rep.tail_empirical) +
                        " exceeds tail tolerance " + std::to_string(tail_tolerance) +
                        "; enlarge the frequency window relative to the evaluation grid");
  return rep;
}

}  // namespace polyspectra
