#pragma once

// Canonical example bodies with their expected diagnostics. The builders here are
// the source of truth; the shipped JSON documents under data/corpus mirror them
// and the test suite asserts the two stay in sync.

#include <string>
#include <vector>

#include "polyspectra/common.hpp"
#include "polyspectra/polytope.hpp"

namespace polyspectra {

inline polytope corpus_cube2() {
  return build_polytope(2, "cube-2d",
                        {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline polytope corpus_cube3() {
  std::vector<vecd> v;
  for (int z = 0; z < 2; ++z)
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) v.push_back({x - 0.5, y - 0.5, z - 0.5});
  std::vector<std::vector<int>> faces = {
      {0, 1, 3, 2}, {4, 5, 7, 6},  // z = -1/2, z = +1/2
      {0, 1, 5, 4}, {2, 3, 7, 6},  // y = -1/2, y = +1/2
      {0, 2, 6, 4}, {1, 3, 7, 5},  // x = -1/2, x = +1/2
  };
  return build_polytope(3, "cube-3d", v, faces);
}

inline polytope corpus_triangle() {
  return build_polytope(2, "triangle", {{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 2}, {2, 0}});
}

inline polytope corpus_pentagon() {
  return build_polytope(2, "pentagon", {{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 2}},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
}

// Non-convex exemplar: a 3 x 2 rectangle with a triangular notch cut into the
// x = 3 side (apex at (2.5, 1)). The two x = 3 remnants total measure 1 against
// measure 2 on x = 0, so e1 is unbalanced; e2 stays balanced. A rectilinear notch
// cannot do this job: with axis-aligned faces only, the closure identity forces
// every axis direction to balance, so the notch must be slanted.
inline polytope corpus_notched_rectangle() {
  return build_polytope(2, "notched-rectangle",
                        {{0, 0}, {3, 0}, {3, 0.5}, {2.5, 1}, {3, 1.5}, {3, 2}, {0, 2}},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 0}},
                        {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}});
}

struct direction_expectation {
  vecd xi;
  double imbalance = 0.0;
  bool applicable = false;
};

struct corpus_entry {
  std::string name;
  polytope body;
  std::vector<direction_expectation> directions;
  bool known_spectral = false;
  std::string tiling_partner;  // candidate set description, empty if none shipped
};

inline std::vector<corpus_entry> corpus_list() {
  std::vector<corpus_entry> entries;
  {
    corpus_entry e{"cube-2d", corpus_cube2(), {}, true, "integer-lattice"};
    e.directions = {{{1.0, 0.0}, 0.0, false}, {{0.0, 1.0}, 0.0, false}};
    entries.push_back(std::move(e));
  }
  {
    corpus_entry e{"cube-3d", corpus_cube3(), {}, true, "integer-lattice"};
    e.directions = {{{1.0, 0.0, 0.0}, 0.0, false},
                    {{0.0, 1.0, 0.0}, 0.0, false},
                    {{0.0, 0.0, 1.0}, 0.0, false}};
    entries.push_back(std::move(e));
  }
  {
    corpus_entry e{"triangle", corpus_triangle(), {}, false, ""};
    e.directions = {{{1.0, 0.0}, -1.0, true}, {{0.0, 1.0}, -1.0, true}};
    entries.push_back(std::move(e));
  }
  {
    corpus_entry e{"pentagon", corpus_pentagon(), {}, false, ""};
    e.directions = {{{1.0, 0.0}, -1.0, true}, {{0.0, 1.0}, -1.0, true}};
    entries.push_back(std::move(e));
  }
  {
    corpus_entry e{"notched-rectangle", corpus_notched_rectangle(), {}, false, ""};
    e.directions = {{{1.0, 0.0}, -1.0, true}, {{0.0, 1.0}, 0.0, false}};
    entries.push_back(std::move(e));
  }
  return entries;
}

struct corpus_result {
  std::string name;
  bool pass = true;
  std::vector<std::string> failures;
};

// Re-derive every entry's diagnostics and compare against the recorded
// expectations. Geometry invariants (closure, volume cross-check, simplex
// disjointness) are enforced by construction inside build_polytope, so a throwing
// builder is itself a failure.
inline std::vector<corpus_result> corpus_verify() {
  std::vector<corpus_result> results;
  std::vector<corpus_entry> entries;
  try {
    entries = corpus_list();
  } catch (const std::exception& e) {
    results.push_back({"corpus", false, {std::string("corpus failed to build: ") + e.what()}});
    return results;
  }
  for (const auto& entry : entries) {
    corpus_result r;
    r.name = entry.name;
    for (const auto& expect : entry.directions) {
      auto rep = direction_report(entry.body, expect.xi);
      if (std::abs(rep.imbalance - expect.imbalance) > tol::imbalance) {
        r.pass = false;
        r.failures.push_back("imbalance mismatch: got " + std::to_string(rep.imbalance) +
                             ", expected " + std::to_string(expect.imbalance));
      }
      if (is_theorem1_applicable(entry.body, expect.xi).applicable != expect.applicable) {
        r.pass = false;
        r.failures.push_back("applicability mismatch for a recorded direction");
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace polyspectra
