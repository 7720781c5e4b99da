#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/polytope.hpp"

namespace polyspectra {

// One term of the boundary exponential sum f(t) = sum_i c_i exp(-2 pi i lambda_i t).
struct wave_term {
  double coefficient = 0.0;  // signed measure total of the faces at this offset
  double frequency = 0.0;    // common <x, xi> offset of those faces
};

struct face_wave {
  std::vector<wave_term> terms;
  bool normalized = false;
  double normalization = 1.0;  // divisor applied to reach f(0) = 1 (the raw imbalance)
};

// Collapses the direction summary into wave terms, grouping faces that share an
// offset (signed measures add; exact cancellations drop out).
inline face_wave make_face_wave(const direction_summary& summary, bool normalize) {
  face_wave w;
  std::vector<direction_face> faces = summary.faces;
  std::sort(faces.begin(), faces.end(),
            [](const direction_face& a, const direction_face& b) { return a.offset < b.offset; });
  double off_scale = 1.0, measure_total = 0.0;
  for (const auto& f : faces) {
    off_scale = std::max(off_scale, std::abs(f.offset));
    measure_total += f.measure;
  }
  std::size_t i = 0;
  while (i < faces.size()) {
    std::size_t j = i;
    double c = 0.0;
    while (j < faces.size() && faces[j].offset - faces[i].offset <= 1e-12 * off_scale) {
      c += faces[j].sign * faces[j].measure;
      ++j;
    }
    if (std::abs(c) > 1e-14 * std::max(1.0, measure_total))
      w.terms.push_back({c, faces[i].offset});
    i = j;
  }
  if (normalize) {
    if (std::abs(summary.imbalance) <= tol::imbalance)
      throw validation_error("BalancedDirection",
                             "cannot normalize: signed face measures cancel in this direction");
    for (auto& t : w.terms) t.coefficient /= summary.imbalance;
    w.normalized = true;
    w.normalization = summary.imbalance;
  }
  return w;
}

inline cplx eval_wave(const face_wave& w, double t) {
  cplx s = 0.0;
  for (const auto& term : w.terms) {
    double ph = -2.0 * pi * term.frequency * t;
    s += term.coefficient * cplx(std::cos(ph), std::sin(ph));
  }
  return s;
}

// Rigorous sup-norm bound on f': 2 pi sum |c_i| |lambda_i|.
inline double derivative_bound(const face_wave& w) {
  double s = 0.0;
  for (const auto& term : w.terms) s += std::abs(term.coefficient) * std::abs(term.frequency);
  return 2.0 * pi * s;
}

// Rigorous dominating bound on sup_t |f(t + tau) - f(t)|:
// sum |c_i| |exp(-2 pi i lambda_i tau) - 1|.
inline double translation_defect_bound(const face_wave& w, double tau) {
  double s = 0.0;
  for (const auto& term : w.terms) {
    double ph = -2.0 * pi * term.frequency * tau;
    s += std::abs(term.coefficient) * std::abs(cplx(std::cos(ph) - 1.0, std::sin(ph)));
  }
  return s;
}

inline double default_tau_step(const face_wave& w) {
  double fmax = 0.0;
  for (const auto& term : w.terms) fmax = std::max(fmax, std::abs(term.frequency));
  if (fmax <= 0.0) return 1e-3;
  return std::min(1e-3, 1.0 / (100.0 * fmax));
}

struct interval_representative {
  long long index = 0;  // interval [index*ell, (index+1)*ell]
  double tau = 0.0;     // accepted translation number inside the interval
  double bound = 0.0;   // verified dominating bound at tau
};

struct translation_certificate {
  rational epsilon;
  double eps = 0.0;
  double tau_step = 0.0;
  double t_scanned = 0.0;  // final scan range [0, t_scanned]
  double ell = 0.0;        // every closed window of this length contains an accepted tau
  bool stable = false;     // max gap moved < 5% when the range was doubled
  int doublings = 0;
  double max_gap_initial = 0.0;
  double max_gap_final = 0.0;
  std::vector<interval_representative> representatives;
};

// Scans [0, T] for translation numbers accepted under the dominating bound, derives the
// covering window length ell as the maximal gap between consecutive accepted points, and
// verifies gap stability by doubling the range until two consecutive doublings leave the
// gap unchanged (within 5%). One clean doubling is not enough: incommensurable frequency
// pairs can hold a short gap across one doubling and still grow it at the next scale.
inline translation_certificate find_translation_numbers(const face_wave& w, rational epsilon,
                                                        double t_range, double tau_step = 0.0) {
  double eps = epsilon.value();
  double coef_total = 0.0;
  for (const auto& term : w.terms) coef_total += std::abs(term.coefficient);
  if (!(eps > 0.0) || !(eps < 2.0 * coef_total))
    throw validation_error("EpsilonOutOfRange",
                           "epsilon must lie in (0, 2 sum |c_i|) for the bound to discriminate");
  if (!(t_range > 0.0)) throw validation_error("BadRange", "scan range must be positive");
  if (tau_step <= 0.0) tau_step = default_tau_step(w);

  auto scan = [&](double T, std::vector<double>* accepted_out) -> double {
    double max_gap = 0.0, prev = -1.0;
    long long steps = static_cast<long long>(std::floor(T / tau_step));
    for (long long k = 0; k <= steps; ++k) {
      double tau = k * tau_step;
      if (translation_defect_bound(w, tau) <= eps) {
        if (prev >= 0.0) max_gap = std::max(max_gap, tau - prev);
        prev = tau;
        if (accepted_out) accepted_out->push_back(tau);
      }
    }
    if (prev < 0.0)
      throw numeric_error(
          "no accepted translation number in range; retry with a finer tau_step, a larger "
          "epsilon, or a longer range");
    return std::max(max_gap, tau_step);  // a dense acceptance still certifies one grid step
  };

  translation_certificate cert;
  cert.epsilon = epsilon;
  cert.eps = eps;
  cert.tau_step = tau_step;

  double T = t_range;
  double g_prev = scan(T, nullptr);
  cert.max_gap_initial = g_prev;
  std::vector<double> accepted;
  double g_cur = g_prev;
  int clean = 0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    accepted.clear();
    g_cur = scan(2.0 * T, &accepted);
    T *= 2.0;
    cert.doublings = attempt + 1;
    clean = (g_cur <= 1.05 * g_prev) ? clean + 1 : 0;
    g_prev = g_cur;
    if (clean >= 2) {
      cert.stable = true;
      break;
    }
  }
  cert.t_scanned = T;
  cert.max_gap_final = g_cur;
  cert.ell = g_cur;
  // Accepted points live on the tau grid, so true gaps are exact multiples of
  // tau_step; snap away float drift accumulated across the scan.
  double steps_per_gap = cert.ell / tau_step;
  if (std::abs(steps_per_gap - std::round(steps_per_gap)) < 1e-6)
    cert.ell = tau_step * std::round(steps_per_gap);

  // Per-interval representatives (bounded count, intervals fully inside the accepted
  // range); the accepted point with the smallest verified bound wins, and interval 0
  // always carries tau = 0.
  long long n_intervals =
      std::max<long long>(1, static_cast<long long>(std::floor(accepted.back() / cert.ell)));
  n_intervals = std::min<long long>(n_intervals, 4096);
  std::size_t pos = 0;
  for (long long k = 0; k < n_intervals; ++k) {
    double lo = k * cert.ell, hi = (k + 1) * cert.ell;
    bool found = false;
    interval_representative rep;
    rep.index = k;
    while (pos < accepted.size() && accepted[pos] <= hi + 1e-15) {
      if (accepted[pos] >= lo - 1e-15) {
        double b = translation_defect_bound(w, accepted[pos]);
        if (!found || b < rep.bound) {
          rep.tau = accepted[pos];
          rep.bound = b;
          found = true;
        }
      }
      ++pos;
    }
    if (pos > 0) --pos;  // boundary points serve both neighbouring intervals
    if (k == 0) {
      rep.tau = 0.0;
      rep.bound = 0.0;
      found = true;
    }
    if (!found)
      throw numeric_error("internal: interval without accepted translation number");
    cert.representatives.push_back(rep);
  }
  return cert;
}

}  // namespace polyspectra
