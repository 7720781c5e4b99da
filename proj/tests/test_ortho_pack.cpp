// Zero location, pairwise-orthogonal packing, density estimation, and the
// squared-transform lattice identity probe.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "polyspectra/corpus.hpp"
#include "polyspectra/ortho_pack.hpp"

using namespace polyspectra;

TEST_CASE("lattice_points enumerates scalar and per-axis lattices") {
  auto z2 = lattice_points(cube_window(2, 0.0, 3.0), 1.0);
  CHECK(z2.points.size() == 16);
  CHECK(z2.provenance == "lattice");
  CHECK(min_pairwise_distance(z2) == Catch::Approx(1.0));

  auto half = lattice_points(cube_window(2, 0.0, 1.0), 0.5);
  CHECK(half.points.size() == 9);

  auto stretched = lattice_points(cube_window(2, 0.0, 2.0), vecd{0.5, 1.0});
  CHECK(stretched.points.size() == 15);  // 5 x 3
  for (const auto& q : stretched.points) {
    CHECK(std::abs(q[0] / 0.5 - std::round(q[0] / 0.5)) < 1e-12);
    CHECK(std::abs(q[1] - std::round(q[1])) < 1e-12);
  }

  auto centered = lattice_points(box{{-1.0, -1.0}, {1.0, 1.0}}, 1.0);
  CHECK(centered.points.size() == 9);

  CHECK(lattice_points(box{{0.0, 0.0}, {-1.0, 1.0}}, 1.0).points.empty());
  CHECK_THROWS_AS(lattice_points(cube_window(2, 0.0, 1.0), vecd{1.0}), validation_error);
  CHECK_THROWS_AS(lattice_points(cube_window(2, 0.0, 1.0), vecd{1.0, 0.0}), validation_error);
  CHECK_THROWS_AS(lattice_points(cube_window(2, 0.0, 1.0), -0.5), validation_error);
}

TEST_CASE("orthogonality over the cube is the integer-difference condition") {
  auto cube = corpus_cube2();
  CHECK(orthogonality_test(cube, {3.0, 1.0}, {0.0, 0.0}));
  CHECK(orthogonality_test(cube, {0.25, 2.0}, {0.25, 0.0}));  // integer gap in one axis suffices
  CHECK_FALSE(orthogonality_test(cube, {0.5, 0.25}, {0.0, 0.0}));
  CHECK_THROWS_AS(orthogonality_test(cube, {1.0, 1.0}, {1.0, 1.0}), validation_error);
}

TEST_CASE("ray probe finds the cube's integer zeros along an axis") {
  auto cube = corpus_cube2();
  ray_spec spec;
  spec.direction = {2.0, 0.0};  // non-unit on purpose; normalized internally
  auto probe = probe_zeros(cube, spec);
  CHECK(probe.spec == "ray");
  REQUIRE(probe.r0_defined);
  CHECK(probe.r0 == Catch::Approx(1.0).margin(1e-9));
  CHECK(probe.zeros.size() >= 9);
  REQUIRE(probe.zeros.size() == probe.residuals.size());
  for (std::size_t i = 0; i < probe.zeros.size(); ++i) {
    CHECK(probe.residuals[i] <= tol::zero);
    double t = probe.zeros[i][0];
    CHECK(std::abs(t - std::round(t)) < 1e-6);
    CHECK(std::abs(probe.zeros[i][1]) < 1e-9);
  }
}

TEST_CASE("window probe finds the triangle's anti-diagonal zeros with r0 = sqrt(2)") {
  auto tri = corpus_triangle();
  window_spec spec;
  spec.window = cube_window(2, -4.0, 4.0);
  spec.step = 0.1;
  auto probe = probe_zeros(tri, spec);
  CHECK(probe.spec == "window");
  REQUIRE(probe.r0_defined);
  CHECK(probe.r0 == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
  for (double r : probe.residuals) CHECK(r <= tol::zero);
  // every anti-diagonal lattice zero in range is located
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    double best = 1e9;
    for (const auto& z : probe.zeros)
      best = std::min(best, dist(z, vecd{double(k), double(-k)}));
    INFO("k = " << k);
    CHECK(best < 1e-6);
  }
}

TEST_CASE("probe specs are validated") {
  auto cube = corpus_cube2();
  ray_spec bad_ray;
  bad_ray.direction = {0.0, 0.0};
  CHECK_THROWS_AS(probe_zeros(cube, bad_ray), validation_error);
  bad_ray.direction = {1.0, 0.0};
  bad_ray.step = 0.0;
  CHECK_THROWS_AS(probe_zeros(cube, bad_ray), validation_error);
  bad_ray.step = 0.01;
  bad_ray.t_max = bad_ray.t_min;
  CHECK_THROWS_AS(probe_zeros(cube, bad_ray), validation_error);
  window_spec bad_window;
  bad_window.window = cube_window(2, 0.0, 1.0);
  bad_window.step = -1.0;
  CHECK_THROWS_AS(probe_zeros(cube, bad_window), validation_error);
}

TEST_CASE("greedy pack is deterministic per seed and pairwise orthogonal") {
  auto tri = corpus_triangle();
  box window = cube_window(2, 0.0, 20.0);
  auto a = greedy_orthogonal_pack(tri, window, 1);
  auto b = greedy_orthogonal_pack(tri, window, 1);
  CHECK(a.provenance == "greedy-packing");
  CHECK(a.seed == 1);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i][0] == b.points[i][0]);
    CHECK(a.points[i][1] == b.points[i][1]);
  }
  CHECK(a.points.size() >= 2);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t j = i + 1; j < a.points.size(); ++j)
      CHECK(orthogonality_test(tri, a.points[i], a.points[j]));

  CHECK_THROWS_AS(greedy_orthogonal_pack(tri, cube_window(3, 0.0, 5.0), 1), validation_error);
}

TEST_CASE("cube packs near density one, triangle packs stay sparse") {
  box window = cube_window(2, 0.0, 12.0);
  std::vector<vecd> centers = {{6.0, 6.0}};

  auto cube_pack = greedy_orthogonal_pack(corpus_cube2(), window, 3);
  auto cube_density = estimate_density(cube_pack, centers, {3.0, 6.0}, window);
  CHECK(cube_density.largest_radius == 6.0);
  CHECK(cube_density.clipped_samples == 0);
  CHECK(cube_density.estimate >= 0.95);

  auto tri_pack = greedy_orthogonal_pack(corpus_triangle(), window, 3);
  auto tri_density = estimate_density(tri_pack, centers, {3.0, 6.0}, window);
  CHECK(tri_density.estimate <= 0.9);
}

TEST_CASE("density estimate flags clipped balls and validates its spec") {
  point_set pts = lattice_points(cube_window(2, 0.0, 10.0), 1.0);
  box window = cube_window(2, 0.0, 10.0);

  auto est = estimate_density(pts, {{1.0, 1.0}, {5.0, 5.0}}, {1.0, 2.0}, window);
  REQUIRE(est.samples.size() == 4);
  CHECK(est.clipped_samples == 1);  // only the corner center at the top radius escapes
  // headline comes from the unclipped center only: 13 lattice points in B_2
  CHECK(est.estimate == Catch::Approx(13.0 / (pi * 4.0)));

  CHECK_THROWS_AS(estimate_density(pts, {}, {1.0}, window), validation_error);
  CHECK_THROWS_AS(estimate_density(pts, {{5.0, 5.0}}, {}, window), validation_error);
  // every ball at the top radius clipped -> no usable sample
  CHECK_THROWS_AS(estimate_density(pts, {{1.0, 1.0}}, {4.0}, window), numeric_error);
}

TEST_CASE("squared-transform sums over the integer lattice reproduce volume^2") {
  auto cube = corpus_cube2();
  auto freqs = lattice_points(box{{-15.0, -15.0}, {15.0, 15.0}}, 1.0);
  REQUIRE(freqs.points.size() == 31 * 31);
  window_spec grid;
  grid.window = cube_window(2, -0.5, 0.5);
  grid.step = 0.1;
  auto rep = spectral_pair_probe(cube, freqs, grid, 0.05);
  CHECK(rep.target == Catch::Approx(1.0));
  CHECK(rep.grid_points == 121);
  CHECK(rep.frequency_count == 961);
  CHECK(rep.tail_radius == Catch::Approx(14.5));
  CHECK(rep.max_deviation <= 0.05);
  CHECK(rep.tail_empirical <= 0.05);
  CHECK(rep.per_term_bound == Catch::Approx(std::pow(4.0 / (2.0 * pi * 14.5), 2)));
  CHECK_FALSE(rep.tail_note.empty());
}

TEST_CASE("probe refuses a frequency window too small for its tail tolerance") {
  auto cube = corpus_cube2();
  auto freqs = lattice_points(box{{-3.0, -3.0}, {3.0, 3.0}}, 1.0);
  window_spec grid;
  grid.window = cube_window(2, -0.5, 0.5);
  grid.step = 0.25;
  CHECK_THROWS_AS(spectral_pair_probe(cube, freqs, grid, 1e-6), numeric_error);

  point_set wrong;
  wrong.dimension = 3;
  wrong.points = {{0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(spectral_pair_probe(cube, wrong, grid, 0.05), validation_error);
}
