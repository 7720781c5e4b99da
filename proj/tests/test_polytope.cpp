// Geometry layer: document loading, validation errors, closure, volumes, and the
// face-imbalance report checked against an independent cross-section oracle.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "polyspectra/corpus.hpp"
#include "polyspectra/io.hpp"
#include "polyspectra/polytope.hpp"
#include "support/oracles.hpp"

using namespace polyspectra;

namespace {
vecd e(int d, int axis) {
  vecd v(d, 0.0);
  v[axis] = 1.0;
  return v;
}
}  // namespace

TEST_CASE("corpus volumes match hand values") {
  CHECK(corpus_cube2().volume == Catch::Approx(1.0).margin(1e-12));
  CHECK(corpus_cube3().volume == Catch::Approx(1.0).margin(1e-12));
  CHECK(corpus_triangle().volume == Catch::Approx(0.5).margin(1e-12));
  CHECK(corpus_pentagon().volume == Catch::Approx(3.5).margin(1e-12));
  CHECK(corpus_notched_rectangle().volume == Catch::Approx(5.75).margin(1e-12));
}

TEST_CASE("divergence-theorem volume agrees with the simplex volume") {
  for (const auto& entry : corpus_list())
    CHECK(divergence_volume(entry.body) == Catch::Approx(entry.body.volume).margin(1e-9));
}

TEST_CASE("measure-weighted normals close up for every corpus entry") {
  for (const auto& entry : corpus_list()) {
    const auto& p = entry.body;
    vecd closure(p.dimension, 0.0);
    for (const auto& f : p.faces)
      for (int i = 0; i < p.dimension; ++i) closure[i] += f.measure * f.normal[i];
    for (double c : closure) CHECK(std::abs(c) <= tol::closure);
  }
}

TEST_CASE("projected closure includes slanted faces, the imbalance does not") {
  // For the pentagon along e2: closure projects to zero, yet the +-e2 faces alone
  // sum to -1 — the slanted face carries the difference.
  auto p = corpus_pentagon();
  vecd xi = e(2, 1);
  double projected = 0.0;
  for (const auto& f : p.faces) projected += f.measure * dot(f.normal, xi);
  CHECK(std::abs(projected) <= tol::closure);
  CHECK(direction_report(p, xi).imbalance == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("imbalance matches the cross-section jump oracle on the whole corpus") {
  for (const auto& entry : corpus_list()) {
    const auto& p = entry.body;
    if (p.dimension > 3) continue;  // oracle slices d = 2, 3 only
    for (int axis = 0; axis < p.dimension; ++axis) {
      double reported = direction_report(p, e(p.dimension, axis)).imbalance;
      double oracle = testsupport::imbalance_oracle(p, axis);
      INFO(entry.name << " axis " << axis);
      CHECK(reported == Catch::Approx(oracle).margin(1e-6));
    }
  }
}

TEST_CASE("frozen imbalance values") {
  CHECK(direction_report(corpus_triangle(), {1.0, 0.0}).imbalance ==
        Catch::Approx(-1.0).margin(1e-12));
  CHECK(direction_report(corpus_triangle(), {0.0, 1.0}).imbalance ==
        Catch::Approx(-1.0).margin(1e-12));
  CHECK(direction_report(corpus_pentagon(), {1.0, 0.0}).imbalance ==
        Catch::Approx(-1.0).margin(1e-12));
  CHECK(direction_report(corpus_notched_rectangle(), {1.0, 0.0}).imbalance ==
        Catch::Approx(-1.0).margin(1e-12));
  CHECK(direction_report(corpus_notched_rectangle(), {0.0, 1.0}).imbalance ==
        Catch::Approx(0.0).margin(1e-12));
  for (int axis = 0; axis < 3; ++axis)
    CHECK(direction_report(corpus_cube3(), e(3, axis)).imbalance ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("applicability couples the flag to the imbalance value") {
  auto yes = is_theorem1_applicable(corpus_triangle(), {1.0, 0.0});
  CHECK(yes.applicable);
  CHECK(yes.imbalance == Catch::Approx(-1.0).margin(1e-12));
  auto no = is_theorem1_applicable(corpus_cube2(), {1.0, 0.0});
  CHECK_FALSE(no.applicable);
  CHECK(no.imbalance == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("direction report negates with the direction") {
  auto p = corpus_notched_rectangle();
  double plus = direction_report(p, {1.0, 0.0}).imbalance;
  double minus = direction_report(p, {-1.0, 0.0}).imbalance;
  CHECK(plus == Catch::Approx(-minus).margin(1e-12));
}

TEST_CASE("imbalance is translation invariant and permutation equivariant") {
  auto p = corpus_triangle();
  auto q = translated(p, {3.25, -7.5});
  CHECK(direction_report(q, {1.0, 0.0}).imbalance ==
        Catch::Approx(direction_report(p, {1.0, 0.0}).imbalance).margin(1e-12));

  auto pent = corpus_pentagon();
  auto swapped = permuted_axes(pent, {1, 0});
  CHECK(direction_report(swapped, {0.0, 1.0}).imbalance ==
        Catch::Approx(direction_report(pent, {1.0, 0.0}).imbalance).margin(1e-12));
}

TEST_CASE("volume normalization scales the imbalance by the (d-1) power") {
  auto p = corpus_triangle();  // volume 1/2, so the rescale factor is sqrt(2)
  auto q = normalize_volume(p);
  CHECK(q.volume == Catch::Approx(1.0).margin(1e-12));
  CHECK(q.scale_factor == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  double before = direction_report(p, {1.0, 0.0}).imbalance;
  double after = direction_report(q, {1.0, 0.0}).imbalance;
  CHECK(after == Catch::Approx(before * std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("direction report rejects non-unit and wrong-arity directions") {
  auto p = corpus_triangle();
  CHECK_THROWS_AS(direction_report(p, {1.0, 1.0}), validation_error);
  CHECK_THROWS_AS(direction_report(p, {1.0, 0.0, 0.0}), validation_error);
}

TEST_CASE("nearly-aligned faces raise the warning flag without being counted") {
  auto p = corpus_cube2();
  double t = 3e-4;  // |<nu, xi>| = 1 - ~4.5e-8: inside the warning band
  double n = std::sqrt(1.0 + t * t);
  auto r = direction_report(p, {1.0 / n, t / n});
  CHECK(r.near_parallel_warning);
  CHECK(r.faces.empty());
  CHECK(r.imbalance == 0.0);
}

TEST_CASE("containment agrees with the simplex decomposition on the notch") {
  auto p = corpus_notched_rectangle();
  CHECK(contains_point(p, vecd{1.0, 1.0}));
  CHECK(contains_point(p, vecd{2.6, 0.3}));
  CHECK_FALSE(contains_point(p, vecd{2.95, 1.0}));  // inside the notch cut
  CHECK_FALSE(contains_point(p, vecd{3.2, 1.0}));
}

TEST_CASE("construction rejects malformed geometry") {
  // vertex index out of range
  CHECK_THROWS_AS(build_polytope(2, "bad", {{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 5}, {2, 0}}),
                  validation_error);
  // degenerate zero-length face
  CHECK_THROWS_AS(build_polytope(2, "bad", {{0, 0}, {1, 0}, {0, 1}}, {{0, 0}, {1, 2}, {2, 0}}),
                  validation_error);
  // non-convex body without an explicit decomposition
  std::vector<vecd> notch_verts = {{0, 0}, {3, 0}, {3, 0.5}, {2.5, 1}, {3, 1.5}, {3, 2}, {0, 2}};
  std::vector<std::vector<int>> notch_faces = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                               {4, 5}, {5, 6}, {6, 0}};
  CHECK_THROWS_AS(build_polytope(2, "bad", notch_verts, notch_faces), validation_error);
  // overlapping decomposition cells
  CHECK_THROWS_AS(build_polytope(2, "bad", {{0, 0}, {1, 0}, {0, 1}, {1, 1}},
                                 {{0, 1}, {1, 3}, {3, 2}, {2, 0}},
                                 {{0, 1, 3}, {0, 3, 2}, {0, 1, 2}}),
                  validation_error);
  // declared normal that disagrees with the geometry
  std::vector<vecd> wrong_normals = {{0.0, 1.0}, {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(build_polytope(2, "bad", {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {}, &wrong_normals),
                  validation_error);
}

TEST_CASE("non-planar face in d = 3 is rejected") {
  std::vector<vecd> verts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                             {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 0.6}};
  std::vector<std::vector<int>> faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                         {2, 3, 7, 6}, {1, 2, 6, 5}, {3, 0, 4, 7}};
  CHECK_THROWS_AS(build_polytope(3, "bent", verts, faces), validation_error);
}

TEST_CASE("document round trip preserves geometry and derived data") {
  for (const auto& entry : corpus_list()) {
    auto doc = polytope_document(entry.body).dump(2);
    auto back = load_polytope(doc);
    CHECK(back.name == entry.body.name);
    CHECK(back.dimension == entry.body.dimension);
    CHECK(back.vertices == entry.body.vertices);
    CHECK(back.volume == Catch::Approx(entry.body.volume).margin(1e-12));
    CHECK(back.faces.size() == entry.body.faces.size());
    CHECK(back.simplices.size() == entry.body.simplices.size());
  }
}

TEST_CASE("document loader reports parse errors distinctly") {
  CHECK_THROWS_AS(load_polytope("this is not json"), parse_error);
  CHECK_THROWS_AS(load_polytope("{\"dimension\": 2}"), parse_error);
  CHECK_THROWS_AS(load_polytope("{\"dimension\": 2, \"vertices\": [[0,0],[1,0],[0,1]],"
                                "\"faces\": \"nope\"}"),
                  parse_error);
}
