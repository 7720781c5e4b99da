#pragma once

// Desk-scale translational-tiling verification for polytope indicator tiles:
// covering multiplicity on an interior-safe sample grid, tiling level verdicts,
// and the density identity dens(Lambda) = level / tile volume.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/ortho_pack.hpp"
#include "polyspectra/polytope.hpp"

namespace polyspectra {

struct tiling_report {
  long long level = 0;           // w
  bool tiles = false;            // every safe sample has multiplicity exactly w
  std::string verdict;           // "tiles-at-level-w" | "not-a-tiling"
  long long total_samples = 0;
  long long safe_samples = 0;
  double exceptional_fraction = 0.0;  // samples excluded by the boundary slack
  long long min_multiplicity = 0;
  long long max_multiplicity = 0;
  double mean_multiplicity = 0.0;
  double sample_step = 0.0;
  double boundary_slack = 0.0;
  std::map<long long, long long> histogram;  // multiplicity -> sample count
};

// Count, at cell-centered grid samples of the region, how many translates
// tile + lambda cover each sample. Samples within `boundary_slack` of any nearby
// translate's face plane are excluded deterministically (the tiling identity only
// holds almost everywhere, and shared boundaries are exactly the measure-zero set
// a grid can hit). The candidate set must pad the region by the tile's bounding
// box, otherwise coverage near the region edge is unverifiable.
inline tiling_report tiling_check(const polytope& tile, const point_set& lambda, const box& region,
                                  long long level) {
  int d = tile.dimension;
  if (region.dimension() != d || (lambda.dimension != d && !lambda.points.empty()))
    throw validation_error("InconsistentDimension", "tile/candidate/region dimension mismatch");
  if (level < 0) throw validation_error("BadLevel", "tiling level must be nonnegative");

  vecd bb_lo = tile.vertices[0], bb_hi = tile.vertices[0];
  for (const auto& v : tile.vertices)
    for (int i = 0; i < d; ++i) {
      bb_lo[i] = std::min(bb_lo[i], v[i]);
      bb_hi[i] = std::max(bb_hi[i], v[i]);
    }
  if (lambda.points.empty())
    throw validation_error("InsufficientCover", "empty candidate set cannot cover the region");
  vecd lam_lo = lambda.points[0], lam_hi = lambda.points[0];
  for (const auto& q : lambda.points)
    for (int i = 0; i < d; ++i) {
      lam_lo[i] = std::min(lam_lo[i], q[i]);
      lam_hi[i] = std::max(lam_hi[i], q[i]);
    }
  for (int i = 0; i < d; ++i) {
    if (lam_lo[i] > region.lo[i] - bb_hi[i] + 1e-9 || lam_hi[i] < region.hi[i] - bb_lo[i] - 1e-9)
      throw validation_error("InsufficientCover",
                             "candidate set does not pad the region by the tile's bounding box");
  }

  double diam = diameter(tile);
  tiling_report rep;
  rep.level = level;
  rep.sample_step = diam / tol::tiling_grid_divisor;
  rep.boundary_slack = tol::boundary_slack_factor * diam;

  std::vector<int> counts(d);
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    counts[i] = std::max(1, static_cast<int>(std::floor(region.side(i) / rep.sample_step)));
    total *= counts[i];
  }
  rep.total_samples = total;
  std::vector<int> mult(static_cast<std::size_t>(total), 0);
  std::vector<char> excluded(static_cast<std::size_t>(total), 0);

  // Per translate, visit only the samples inside its (slack-inflated) bounding box.
  std::vector<int> first(d), last(d), ix(d);
  for (const auto& q : lambda.points) {
    bool overlap = true;
    for (int i = 0; i < d; ++i) {
      double lo = q[i] + bb_lo[i] - rep.boundary_slack;
      double hi = q[i] + bb_hi[i] + rep.boundary_slack;
      first[i] = std::max(0, static_cast<int>(std::ceil((lo - region.lo[i]) / rep.sample_step - 0.5)));
      last[i] = std::min(counts[i] - 1,
                         static_cast<int>(std::floor((hi - region.lo[i]) / rep.sample_step - 0.5)));
      if (first[i] > last[i]) overlap = false;
    }
    if (!overlap) continue;
    ix = first;
    vecd rel(d);
    while (true) {
      long long flat = 0;
      for (int i = d - 1; i >= 0; --i) flat = flat * counts[i] + ix[i];
      for (int i = 0; i < d; ++i)
        rel[i] = region.lo[i] + (ix[i] + 0.5) * rep.sample_step - q[i];
      for (const auto& f : tile.faces) {
        if (std::abs(dot(rel, f.normal) - f.offset) <= rep.boundary_slack) {
          excluded[static_cast<std::size_t>(flat)] = 1;
          break;
        }
      }
      if (!excluded[static_cast<std::size_t>(flat)] && contains_point(tile, rel))
        ++mult[static_cast<std::size_t>(flat)];
      int carry = 0;
      while (carry < d && ++ix[carry] > last[carry]) {
        ix[carry] = first[carry];
        ++carry;
      }
      if (carry == d) break;
    }
  }

  long long safe = 0, matching = 0;
  long long mn = std::numeric_limits<long long>::max(), mx = 0;
  double mean = 0.0;
  for (long long i = 0; i < total; ++i) {
    if (excluded[static_cast<std::size_t>(i)]) continue;
    long long m = mult[static_cast<std::size_t>(i)];
    ++safe;
    ++rep.histogram[m];
    mn = std::min(mn, m);
    mx = std::max(mx, m);
    mean += static_cast<double>(m);
    if (m == level) ++matching;
  }
  if (safe == 0) throw numeric_error("every sample fell inside the boundary slack; region too small");
  rep.safe_samples = safe;
  rep.exceptional_fraction = static_cast<double>(total - safe) / static_cast<double>(total);
  rep.min_multiplicity = mn;
  rep.max_multiplicity = mx;
  rep.mean_multiplicity = mean / static_cast<double>(safe);
  rep.tiles = (matching == safe);
  rep.verdict = rep.tiles ? ("tiles-at-level-" + std::to_string(level)) : "not-a-tiling";
  return rep;
}

struct remark1_report {
  double density = 0.0;
  double spread = 0.0;
  double expected = 0.0;  // level / tile volume
  double relative_error = 0.0;
  bool pass = false;
  double tolerance = 0.05;
};

// Density identity for verified tilings: dens(Lambda) must equal level / volume.
// Density is estimated by ball counts centered well inside the candidate window.
inline remark1_report remark1_check(const polytope& tile, const point_set& lambda, long long level,
                                    const box& lambda_window, const tiling_report* verified = nullptr,
                                    double tolerance = 0.05) {
  if (verified != nullptr && !verified->tiles)
    throw validation_error("NotATiling", "density identity applies to verified tilings only");
  int d = tile.dimension;
  double half = 0.5 * lambda_window.min_side();
  double r_max = 0.8 * half;
  if (!(r_max > 0)) throw validation_error("BadDensitySpec", "candidate window too small");
  std::vector<double> radii = {0.25 * r_max, 0.5 * r_max, r_max};
  vecd mid(d);
  for (int i = 0; i < d; ++i) mid[i] = 0.5 * (lambda_window.lo[i] + lambda_window.hi[i]);
  // 3^d centers offset by half the leftover margin keep every largest ball inside.
  double off = 0.5 * (half - r_max);
  std::vector<vecd> centers;
  std::vector<int> ix(d, 0);
  while (true) {
    vecd c = mid;
    for (int i = 0; i < d; ++i) c[i] += (ix[i] - 1) * off;
    centers.push_back(std::move(c));
    int carry = 0;
    while (carry < d && ++ix[carry] == 3) ix[carry++] = 0;
    if (carry == d) break;
  }
  auto est = estimate_density(lambda, centers, radii, lambda_window);
  remark1_report rep;
  rep.density = est.estimate;
  rep.spread = est.spread;
  rep.expected = static_cast<double>(level) / tile.volume;
  rep.relative_error = std::abs(rep.density - rep.expected) / rep.expected;
  rep.tolerance = tolerance;
  rep.pass = rep.relative_error <= tolerance;
  return rep;
}

}  // namespace polyspectra
