// Command-line front-end: every library stage is reachable as a subcommand that
// prints a one-line summary and writes deterministic JSON/CSV artifacts (plus a
// timestamped .meta.json sidecar) into the output directory.
//
// Exit codes: 0 success, 10 parse/usage, 20 validation, 30 numeric-inconclusive.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyspectra/polyspectra.hpp"

namespace ps = polyspectra;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 10;
constexpr int exit_validation = 20;
constexpr int exit_numeric = 30;

constexpr std::uint64_t default_seed = 20010114;

struct run_context {
  std::string out_dir;
  std::string command_line;
};

ps::vecd parse_vec(const std::string& text, const char* what) {
  ps::vecd out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ps::parse_error(std::string(what) + ": bad numeric list entry '" + item + "' in '" +
                            text + "'");
    }
  }
  if (out.empty()) throw ps::parse_error(std::string(what) + ": empty numeric list");
  return out;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '-');
  return out.empty() ? std::string("unnamed") : out;
}

// Inputs: either a polytope document path or a shipped corpus entry by name.
struct polytope_source {
  std::string path;
  std::string corpus_name;

  void attach(CLI::App* cmd, const char* path_flag = "--polytope") {
    cmd->add_option(path_flag, path, "path to a polytope JSON document");
    cmd->add_option("--corpus", corpus_name,
                    "built-in corpus entry name (cube-2d, cube-3d, triangle, pentagon, "
                    "notched-rectangle)");
  }

  ps::polytope load() const {
    if (path.empty() == corpus_name.empty())
      throw ps::parse_error("provide exactly one of --polytope <file> or --corpus <name>");
    if (!path.empty()) return ps::load_polytope_file(path);
    for (const auto& e : ps::corpus_list())
      if (e.name == corpus_name) return e.body;
    throw ps::parse_error("unknown corpus entry: " + corpus_name);
  }
};

std::filesystem::path emit_json(const run_context& ctx, const std::string& filename,
                                const ps::ordered_json& j) {
  std::filesystem::path path = std::filesystem::path(ctx.out_dir) / filename;
  ps::write_json_report(path, j);
  ps::write_meta_sidecar(path, ctx.command_line);
  std::printf("wrote %s\n", path.string().c_str());
  return path;
}

void emit_csv(const run_context& ctx, const std::string& filename, const std::string& content) {
  std::filesystem::path path = std::filesystem::path(ctx.out_dir) / filename;
  ps::write_text_atomic(path, content);
  std::printf("wrote %s\n", path.string().c_str());
}

ps::box parse_cube_window(const std::string& text, int dimension, const char* what) {
  ps::vecd v = parse_vec(text, what);
  if (v.size() == 2) return ps::cube_window(dimension, v[0], v[1]);
  if (static_cast<int>(v.size()) == 2 * dimension)
    return ps::box{ps::vecd(v.begin(), v.begin() + dimension),
                   ps::vecd(v.begin() + dimension, v.end())};
  throw ps::parse_error(std::string(what) +
                        ": expected 'lo,hi' (cube) or per-axis 'lo1,..,lod,hi1,..,hid'");
}

// Shared default for density sampling: three nested radii around up-to-3^d centers
// chosen so the largest ball stays inside the window.
void default_density_spec(const ps::box& window, std::vector<ps::vecd>& centers,
                          std::vector<double>& radii) {
  int d = window.dimension();
  double r_max = 0.4 * window.min_side();
  radii = {r_max / 4.0, r_max / 2.0, r_max};
  ps::vecd mid(d);
  for (int i = 0; i < d; ++i) mid[i] = 0.5 * (window.lo[i] + window.hi[i]);
  double off = 0.5 * window.min_side() - r_max;
  std::vector<double> offsets = off > 0 ? std::vector<double>{-off, 0.0, off}
                                        : std::vector<double>{0.0};
  std::vector<int> idx(d, 0);
  while (true) {
    ps::vecd c(d);
    for (int i = 0; i < d; ++i) c[i] = mid[i] + offsets[static_cast<std::size_t>(idx[i])];
    centers.push_back(std::move(c));
    int carry = 0;
    while (carry < d && ++idx[carry] >= static_cast<int>(offsets.size())) {
      idx[carry] = 0;
      ++carry;
    }
    if (carry == d) break;
  }
}

void add_validate(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("validate", "load a polytope document, run all geometric "
                                             "validation, and report volume/diameter/closure");
  auto src = std::make_shared<polytope_source>();
  auto normalize = std::make_shared<bool>(false);
  src->attach(cmd);
  cmd->add_flag("--normalize", *normalize, "rescale to unit volume before reporting");
  cmd->callback([&ctx, src, normalize] {
    ps::polytope p = src->load();
    if (*normalize) p = ps::normalize_volume(p);
    ps::ordered_json j = ps::report_envelope("validate");
    j["document"] = ps::polytope_document(p);
    j["volume"] = p.volume;
    j["divergence_volume"] = ps::divergence_volume(p);
    j["diameter"] = ps::diameter(p);
    j["normalized"] = *normalize;
    emit_json(ctx, "validate-" + sanitize(p.name) + ".json", j);
    std::printf("ok name=%s dimension=%d volume=%.12g faces=%zu simplices=%zu\n", p.name.c_str(),
                p.dimension, p.volume, p.faces.size(), p.simplices.size());
  });
}

void add_imbalance(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("imbalance", "face-imbalance test along a direction: signed "
                                              "measures of the faces orthogonal to xi");
  auto src = std::make_shared<polytope_source>();
  auto xi_text = std::make_shared<std::string>();
  src->attach(cmd);
  cmd->add_option("--xi", *xi_text, "direction, comma separated (e.g. \"1,0\")")->required();
  cmd->callback([&ctx, src, xi_text] {
    ps::polytope p = src->load();
    ps::vecd xi = parse_vec(*xi_text, "--xi");
    auto summary = ps::direction_report(p, xi);
    auto applic = ps::is_theorem1_applicable(p, xi);
    ps::ordered_json j = ps::to_json(summary);
    j["polytope"] = p.name;
    emit_json(ctx, "imbalance-" + sanitize(p.name) + ".json", j);
    std::printf("imbalance %.12g applicable %s\n", applic.imbalance,
                applic.applicable ? "true" : "false");
  });
}

void add_ft_eval(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("ft-eval", "evaluate the indicator Fourier transform at one "
                                            "frequency (exact, boundary form, gradient)");
  auto src = std::make_shared<polytope_source>();
  auto eta_text = std::make_shared<std::string>();
  src->attach(cmd);
  cmd->add_option("--eta", *eta_text, "frequency, comma separated")->required();
  cmd->callback([&ctx, src, eta_text] {
    ps::polytope p = src->load();
    ps::vecd eta = parse_vec(*eta_text, "--eta");
    if (static_cast<int>(eta.size()) != p.dimension)
      throw ps::validation_error("InconsistentDimension", "frequency arity != polytope dimension");
    ps::cplx exact = ps::ft_exact(p, eta);
    auto grad = ps::ft_gradient(p, eta);
    ps::ordered_json j = ps::report_envelope("ft-eval");
    j["polytope"] = p.name;
    j["eta"] = eta;
    j["exact"] = {{"re", exact.real()}, {"im", exact.imag()}, {"abs", std::abs(exact)}};
    if (ps::norm(eta) > 0.0) {
      ps::cplx bd = ps::ft_boundary(p, eta);
      j["boundary"] = {{"re", bd.real()},
                       {"im", bd.imag()},
                       {"abs", std::abs(bd)},
                       {"delta_vs_exact", std::abs(bd - exact)}};
    }
    ps::ordered_json g = ps::ordered_json::array();
    for (const auto& c : grad) g.push_back({{"re", c.real()}, {"im", c.imag()}});
    j["gradient"] = std::move(g);
    emit_json(ctx, "ft-eval-" + sanitize(p.name) + ".json", j);
    std::printf("ft(%s) = %.12g %+.12gi  |.| = %.12g\n", eta_text->c_str(), exact.real(),
                exact.imag(), std::abs(exact));
  });
}

void add_ft_slice(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("ft-slice", "sample the transform along t*xi, compare with the "
                                             "boundary leading term, and report sup t^2|residual|");
  auto src = std::make_shared<polytope_source>();
  auto xi_text = std::make_shared<std::string>();
  auto t_min = std::make_shared<double>(1.0);
  auto t_max = std::make_shared<double>(100.0);
  auto step = std::make_shared<double>(0.01);
  src->attach(cmd);
  cmd->add_option("--xi", *xi_text, "direction, comma separated")->required();
  cmd->add_option("--t-min", *t_min, "slice start (default 1)");
  cmd->add_option("--t-max", *t_max, "slice end (default 100)");
  cmd->add_option("--step", *step, "slice step (default 0.01)");
  cmd->callback([&ctx, src, xi_text, t_min, t_max, step] {
    ps::polytope p = src->load();
    ps::vecd xi = parse_vec(*xi_text, "--xi");
    auto slice = ps::slice_profile(p, xi, *t_min, *t_max, *step);
    ps::ordered_json j = ps::to_json(slice);
    j["polytope"] = p.name;
    std::string stem = "ft-slice-" + sanitize(p.name);
    emit_json(ctx, stem + ".json", j);
    emit_csv(ctx, stem + ".csv", ps::slice_csv(slice));
    std::printf("sup t^2|residual| = %.12g at t = %.6g over [%g, %g]\n", slice.k3_observed,
                slice.k3_at, *t_min, *t_max);
  });
}

void add_zeros(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("zeros", "locate zeros of the transform along a ray or over a "
                                          "window; reports the nearest-zero radius r0");
  auto src = std::make_shared<polytope_source>();
  auto ray_text = std::make_shared<std::string>();
  auto window_text = std::make_shared<std::string>();
  auto t_min = std::make_shared<double>(0.25);
  auto t_max = std::make_shared<double>(10.0);
  auto step = std::make_shared<double>(0.0);
  src->attach(cmd);
  cmd->add_option("--ray", *ray_text, "scan direction for a 1-D ray scan");
  cmd->add_option("--window", *window_text, "scan box 'lo,hi' for a full grid scan");
  cmd->add_option("--t-min", *t_min, "ray scan start (default 0.25)");
  cmd->add_option("--t-max", *t_max, "ray scan end (default 10)");
  cmd->add_option("--step", *step, "scan step (default 0.01 ray, 0.05 window)");
  cmd->callback([&ctx, src, ray_text, window_text, t_min, t_max, step] {
    ps::polytope p = src->load();
    if (ray_text->empty() == window_text->empty())
      throw ps::parse_error("provide exactly one of --ray or --window");
    ps::zero_set_probe probe;
    if (!ray_text->empty()) {
      ps::ray_spec spec;
      spec.direction = parse_vec(*ray_text, "--ray");
      spec.t_min = *t_min;
      spec.t_max = *t_max;
      spec.step = *step > 0 ? *step : 0.01;
      probe = ps::probe_zeros(p, spec);
    } else {
      ps::window_spec spec;
      spec.window = parse_cube_window(*window_text, p.dimension, "--window");
      spec.step = *step > 0 ? *step : 0.05;
      probe = ps::probe_zeros(p, spec);
    }
    ps::ordered_json j = ps::to_json(probe);
    j["polytope"] = p.name;
    emit_json(ctx, "zeros-" + sanitize(p.name) + ".json", j);
    if (probe.r0_defined)
      std::printf("zeros %zu  r0 %.12g\n", probe.zeros.size(), probe.r0);
    else
      std::printf("zeros 0  (no zero found in the scanned region)\n");
  });
}

void add_translation_numbers(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("translation-numbers",
                                 "scan the face wave for epsilon translation numbers; reports the "
                                 "covering length ell and per-interval representatives");
  auto src = std::make_shared<polytope_source>();
  auto xi_text = std::make_shared<std::string>();
  auto eps_text = std::make_shared<std::string>();
  auto t_range = std::make_shared<double>(5.0);
  auto tau_step = std::make_shared<double>(0.0);
  src->attach(cmd);
  cmd->add_option("--xi", *xi_text, "direction, comma separated")->required();
  cmd->add_option("--epsilon", *eps_text, "tolerance as an exact rational, e.g. \"1/6\"")
      ->required();
  cmd->add_option("--t-range", *t_range, "initial scan range (default 5; doubled until stable)");
  cmd->add_option("--tau-step", *tau_step, "scan grid step (default: auto from frequencies)");
  cmd->callback([&ctx, src, xi_text, eps_text, t_range, tau_step] {
    ps::polytope p = src->load();
    ps::vecd xi = parse_vec(*xi_text, "--xi");
    auto summary = ps::direction_report(p, xi);
    auto wave = ps::make_face_wave(summary, true);
    auto cert = ps::find_translation_numbers(wave, ps::rational::parse(*eps_text), *t_range,
                                             *tau_step);
    ps::ordered_json j = ps::to_json(cert);
    j["polytope"] = p.name;
    j["xi"] = xi;
    emit_json(ctx, "translation-numbers-" + sanitize(p.name) + ".json", j);
    std::printf("ell %.12g stable %s representatives %zu\n", cert.ell,
                cert.stable ? "true" : "false", cert.representatives.size());
  });
}

void add_certificate(CLI::App& app, run_context& ctx, int& exit_code) {
  auto* cmd = app.add_subcommand(
      "certificate", "full non-spectrality certificate: constants (K, ell, N, D, P, Q), "
                     "boundary-case separation chain, zero radius, and windowed tube counts");
  auto src = std::make_shared<polytope_source>();
  auto xi_text = std::make_shared<std::string>();
  auto eps_text = std::make_shared<std::string>();
  auto t_range = std::make_shared<double>(5.0);
  auto grad_t_max = std::make_shared<double>(50.0);
  auto grad_samples = std::make_shared<int>(10000);
  auto slice_t_max = std::make_shared<double>(100.0);
  auto zero_window = std::make_shared<double>(4.0);
  auto zero_step = std::make_shared<double>(0.1);
  auto window_side = std::make_shared<double>(50.0);
  auto seed = std::make_shared<std::uint64_t>(default_seed);
  auto skip_density = std::make_shared<bool>(false);
  src->attach(cmd);
  cmd->add_option("--xi", *xi_text, "direction, comma separated")->required();
  cmd->add_option("--epsilon", *eps_text, "tolerance as an exact rational, e.g. \"1/6\"")
      ->required();
  cmd->add_option("--t-range", *t_range, "translation scan range (default 5)");
  cmd->add_option("--grad-t-max", *grad_t_max, "gradient sampling radius (default 50)");
  cmd->add_option("--grad-samples", *grad_samples, "gradient sample count (default 10000)");
  cmd->add_option("--slice-t-max", *slice_t_max, "slice sampling end (default 100)");
  cmd->add_option("--zero-window", *zero_window, "half-width of the zero-probe box (default 4)");
  cmd->add_option("--zero-step", *zero_step, "zero-probe grid step (default 0.1)");
  cmd->add_option("--window-side", *window_side, "side of the candidate-pack window (default 50)");
  cmd->add_option("--seed", *seed, "greedy-pack seed (default fixed for reproducibility)");
  cmd->add_flag("--skip-density", *skip_density,
                "skip the greedy pack and windowed tube-count stage");
  cmd->callback([&ctx, &exit_code, src, xi_text, eps_text, t_range, grad_t_max, grad_samples,
                 slice_t_max, zero_window, zero_step, window_side, seed, skip_density] {
    ps::polytope p = src->load();
    ps::vecd xi = parse_vec(*xi_text, "--xi");
    ps::rational eps = ps::rational::parse(*eps_text);
    auto summary = ps::direction_report(p, xi);
    auto wave = ps::make_face_wave(summary, true);
    auto grad = ps::estimate_grad_constant(p, *grad_t_max, *grad_samples, default_seed);
    auto slice = ps::slice_profile(p, xi, 1.0, *slice_t_max, 0.01);
    auto shifts = ps::find_translation_numbers(wave, eps, *t_range);
    auto rep = ps::derive_constants(p, xi, eps, grad, slice, wave, shifts);
    ps::separation_input boundary_case;
    boundary_case.hypothetical = true;
    ps::separation_check(rep, wave, boundary_case);

    auto probe = ps::probe_zeros(
        p, ps::window_spec{ps::cube_window(p.dimension, -*zero_window, *zero_window), *zero_step});
    ps::ordered_json j;
    if (probe.r0_defined) {
      ps::tube_capacity(rep, probe.r0);
      if (!*skip_density) {
        ps::box window = ps::cube_window(p.dimension, 0.0, *window_side);
        auto pack = ps::greedy_orthogonal_pack(p, window, *seed);
        auto verdict = ps::density_contradiction(rep, pack, window);
        j["density"] = ps::to_json(verdict);
        j["pack_size"] = static_cast<long long>(pack.points.size());
      }
    } else {
      rep.notes.push_back("no transform zero found in the probed box, so the capacity bound "
                          "has no r0 and the tube-count stage was skipped");
    }
    ps::ordered_json out = ps::to_json(rep);
    out["gradient_bound"] = ps::to_json(grad);
    out["slice_k3"] = slice.k3_observed;
    out["translation"] = ps::to_json(shifts);
    out["zero_probe"] = ps::to_json(probe);
    for (auto& [key, value] : j.items()) out[key] = value;
    emit_json(ctx, "certificate-" + sanitize(p.name) + ".json", out);
    for (const auto& c : rep.checks)
      std::printf("  %-26s %14.6g %2s %14.6g  margin %10.4g  %s\n", c.name.c_str(), c.lhs,
                  c.relation.c_str(), c.rhs, c.margin, c.holds ? "holds" : "VIOLATED");
    std::printf("verdict %s\n", rep.verdict.c_str());
    if (rep.verdict != "certified-at-desk-scale") exit_code = exit_numeric;
  });
}

void add_pack(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("pack", "greedy maximal set of pairwise-orthogonal exponential "
                                         "frequencies inside a window");
  auto src = std::make_shared<polytope_source>();
  auto window_text = std::make_shared<std::string>("0,20");
  auto seed = std::make_shared<std::uint64_t>(default_seed);
  auto best_of = std::make_shared<int>(1);
  src->attach(cmd);
  cmd->add_option("--window", *window_text, "pack window 'lo,hi' (default 0,20)");
  cmd->add_option("--seed", *seed, "base seed (default fixed for reproducibility)");
  cmd->add_option("--best-of", *best_of, "try seeds seed..seed+k-1, keep the largest pack");
  cmd->callback([&ctx, src, window_text, seed, best_of] {
    ps::polytope p = src->load();
    ps::box window = parse_cube_window(*window_text, p.dimension, "--window");
    if (*best_of < 1) throw ps::parse_error("--best-of must be at least 1");
    ps::point_set best;
    for (int k = 0; k < *best_of; ++k) {
      auto pack = ps::greedy_orthogonal_pack(p, window, *seed + static_cast<std::uint64_t>(k));
      if (pack.points.size() > best.points.size() || k == 0) best = std::move(pack);
    }
    ps::ordered_json j = ps::to_json(best);
    j["polytope"] = p.name;
    j["window_lo"] = window.lo;
    j["window_hi"] = window.hi;
    j["best_of"] = *best_of;
    if (best.points.size() > 1) j["min_pairwise_distance"] = ps::min_pairwise_distance(best);
    emit_json(ctx,
              "pack-" + sanitize(p.name) + "-s" + std::to_string(best.seed) + ".json", j);
    std::printf("pack size %zu (seed %llu, best of %d)\n", best.points.size(),
                static_cast<unsigned long long>(best.seed), *best_of);
  });
}

void add_density(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand("density", "estimate the density of a point set: ball counts "
                                            "over nested radii at several centers");
  auto points_path = std::make_shared<std::string>();
  auto window_text = std::make_shared<std::string>();
  auto radii_text = std::make_shared<std::string>();
  cmd->add_option("--points", *points_path, "point-set JSON document (e.g. a pack report)")
      ->required();
  cmd->add_option("--window", *window_text, "window 'lo,hi' the points live in")->required();
  cmd->add_option("--radii", *radii_text, "comma-separated ball radii (default: nested auto)");
  cmd->callback([&ctx, points_path, window_text, radii_text] {
    ps::point_set points = ps::load_point_set_file(*points_path);
    ps::box window = parse_cube_window(*window_text, points.dimension, "--window");
    std::vector<ps::vecd> centers;
    std::vector<double> radii;
    default_density_spec(window, centers, radii);
    if (!radii_text->empty()) radii = parse_vec(*radii_text, "--radii");
    auto est = ps::estimate_density(points, centers, radii, window);
    ps::ordered_json j = ps::to_json(est);
    j["points_file"] = *points_path;
    std::string stem = "density-" +
                       sanitize(std::filesystem::path(*points_path).stem().string());
    emit_json(ctx, stem + ".json", j);
    emit_csv(ctx, stem + ".csv", ps::density_csv(est));
    std::printf("density %.6g spread %.6g at radius %.6g\n", est.estimate, est.spread,
                est.largest_radius);
  });
}

void add_tiling_check(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand(
      "tiling-check", "count translate multiplicities of tile + lattice over a region; "
                      "optionally verify the density identity (density = level / volume)");
  auto src = std::make_shared<polytope_source>();
  auto lattice_path = std::make_shared<std::string>();
  auto spacing_text = std::make_shared<std::string>();
  auto region_text = std::make_shared<std::string>("0,5");
  auto level = std::make_shared<long long>(1);
  auto identity = std::make_shared<bool>(false);
  auto lambda_window_text = std::make_shared<std::string>("-20,20");
  src->attach(cmd, "--tile");
  cmd->add_option("--lattice", *lattice_path, "point-set JSON with the translate set");
  cmd->add_option("--lattice-spacing", *spacing_text,
                  "generate diag(s1,..,sd) Z^d instead, e.g. \"0.5,1\"");
  cmd->add_option("--region", *region_text, "multiplicity-count region 'lo,hi' (default 0,5)");
  cmd->add_option("--level", *level, "expected multiplicity (default 1)");
  cmd->add_flag("--density-identity", *identity,
                "also check lattice density against level / volume");
  cmd->add_option("--lambda-window", *lambda_window_text,
                  "window for the density identity (default -20,20)");
  cmd->callback([&ctx, src, lattice_path, spacing_text, region_text, level, identity,
                 lambda_window_text] {
    ps::polytope tile = src->load();
    int d = tile.dimension;
    ps::box region = parse_cube_window(*region_text, d, "--region");
    if (lattice_path->empty() == spacing_text->empty())
      throw ps::parse_error("provide exactly one of --lattice or --lattice-spacing");
    ps::vecd spacing;
    ps::point_set lambda;
    if (!lattice_path->empty()) {
      lambda = ps::load_point_set_file(*lattice_path);
    } else {
      spacing = parse_vec(*spacing_text, "--lattice-spacing");
      if (spacing.size() == 1) spacing.assign(static_cast<std::size_t>(d), spacing[0]);
      // cover the region shifted by the tile's bounding box, plus one spacing of slack
      ps::vecd bb_lo(d, 0.0), bb_hi(d, 0.0);
      for (int i = 0; i < d; ++i) {
        bb_lo[i] = bb_hi[i] = tile.vertices.front()[static_cast<std::size_t>(i)];
        for (const auto& v : tile.vertices) {
          bb_lo[i] = std::min(bb_lo[i], v[static_cast<std::size_t>(i)]);
          bb_hi[i] = std::max(bb_hi[i], v[static_cast<std::size_t>(i)]);
        }
      }
      ps::box cover(region);
      for (int i = 0; i < d; ++i) {
        cover.lo[i] = region.lo[i] - bb_hi[i] - spacing[static_cast<std::size_t>(i)];
        cover.hi[i] = region.hi[i] - bb_lo[i] + spacing[static_cast<std::size_t>(i)];
      }
      lambda = ps::lattice_points(cover, spacing);
    }
    auto report = ps::tiling_check(tile, lambda, region, *level);
    ps::ordered_json j = ps::to_json(report);
    j["tile"] = tile.name;
    j["lattice_points"] = static_cast<long long>(lambda.points.size());
    std::string stem = "tiling-check-" + sanitize(tile.name);
    if (*identity) {
      ps::box lw = parse_cube_window(*lambda_window_text, d, "--lambda-window");
      ps::point_set lambda_window_set =
          spacing.empty() ? lambda : ps::lattice_points(lw, spacing);
      auto r1 = ps::remark1_check(tile, lambda_window_set, *level, lw, &report);
      j["density_identity"] = ps::to_json(r1);
      std::printf("density identity: %.6g vs expected %.6g (relative error %.4g) %s\n",
                  r1.density, r1.expected, r1.relative_error, r1.pass ? "pass" : "FAIL");
    }
    emit_json(ctx, stem + ".json", j);
    emit_csv(ctx, stem + ".csv", ps::multiplicity_csv(report));
    std::printf("%s  multiplicity [%lld, %lld] mean %.6g  exceptional %.4g\n",
                report.verdict.c_str(), report.min_multiplicity, report.max_multiplicity,
                report.mean_multiplicity, report.exceptional_fraction);
  });
}

void add_spectral_probe(CLI::App& app, run_context& ctx) {
  auto* cmd = app.add_subcommand(
      "spectral-probe", "quadratic-sum test of a candidate spectrum: sum over frequencies of "
                        "|ft(lambda - xi)|^2 against volume^2 on a grid of xi");
  auto src = std::make_shared<polytope_source>();
  auto freqs_path = std::make_shared<std::string>();
  auto freq_window_text = std::make_shared<std::string>("-15,15");
  auto grid_text = std::make_shared<std::string>("-0.5,0.5");
  auto grid_step = std::make_shared<double>(0.1);
  auto tail_tol = std::make_shared<double>(0.05);
  src->attach(cmd);
  cmd->add_option("--freqs", *freqs_path, "candidate spectrum as a point-set JSON document");
  cmd->add_option("--freq-window", *freq_window_text,
                  "use integer-lattice frequencies in this window instead (default -15,15)");
  cmd->add_option("--grid", *grid_text, "xi grid window (default -0.5,0.5)");
  cmd->add_option("--grid-step", *grid_step, "xi grid step (default 0.1)");
  cmd->add_option("--tail-tolerance", *tail_tol,
                  "max tolerated empirical outer-shell mass (default 0.05)");
  cmd->callback([&ctx, src, freqs_path, freq_window_text, grid_text, grid_step, tail_tol] {
    ps::polytope p = src->load();
    ps::point_set freqs =
        !freqs_path->empty()
            ? ps::load_point_set_file(*freqs_path)
            : ps::lattice_points(parse_cube_window(*freq_window_text, p.dimension,
                                                   "--freq-window"));
    ps::window_spec grid{parse_cube_window(*grid_text, p.dimension, "--grid"), *grid_step};
    auto report = ps::spectral_pair_probe(p, freqs, grid, *tail_tol);
    ps::ordered_json j = ps::to_json(report);
    j["polytope"] = p.name;
    emit_json(ctx, "spectral-probe-" + sanitize(p.name) + ".json", j);
    std::printf("max deviation %.6g (target %.6g, tail %.6g within radius %.6g)\n",
                report.max_deviation, report.target, report.tail_empirical, report.tail_radius);
  });
}

void add_corpus_verify(CLI::App& app, run_context& ctx, int& exit_code) {
  auto* cmd = app.add_subcommand("corpus-verify", "re-derive every built-in corpus entry's "
                                                  "expected imbalances and applicability flags");
  auto dir = std::make_shared<std::string>();
  cmd->add_option("--dir", *dir,
                  "also compare shipped corpus documents in this directory with the built-ins");
  cmd->callback([&ctx, &exit_code, dir] {
    auto results = ps::corpus_verify();
    if (!dir->empty()) {
      for (auto& r : results) {
        std::filesystem::path path = std::filesystem::path(*dir) / (r.name + ".json");
        try {
          ps::polytope shipped = ps::load_polytope_file(path.string());
          ps::polytope built;
          for (const auto& e : ps::corpus_list())
            if (e.name == r.name) built = e.body;
          if (shipped.vertices != built.vertices)
            r.failures.push_back("shipped document vertices differ from the built-in entry");
          if (std::abs(shipped.volume - built.volume) > 1e-12)
            r.failures.push_back("shipped document volume differs from the built-in entry");
        } catch (const std::exception& e) {
          r.failures.push_back(std::string("shipped document failed to load: ") + e.what());
        }
        r.pass = r.pass && r.failures.empty();
      }
    }
    ps::ordered_json j = ps::to_json(results);
    emit_json(ctx, "corpus-verify.json", j);
    bool all = true;
    for (const auto& r : results) {
      std::printf("%-18s %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL");
      for (const auto& f : r.failures) std::printf("    %s\n", f.c_str());
      all = all && r.pass;
    }
    if (!all) exit_code = exit_validation;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyspectra: Fourier-analytic diagnostics for polytope spectrality — exact "
               "transforms, face-imbalance tests, almost-periodic certificates, orthogonal "
               "packings, and tiling checks"};
  app.require_subcommand(1);

  run_context ctx;
  std::ostringstream cmd;
  for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
  ctx.command_line = cmd.str();

  app.add_option("--out", ctx.out_dir, "output directory for reports")
      ->envname("POLYSPECTRA_OUT")
      ->default_val("reports");

  int exit_code = exit_ok;
  add_validate(app, ctx);
  add_imbalance(app, ctx);
  add_ft_eval(app, ctx);
  add_ft_slice(app, ctx);
  add_zeros(app, ctx);
  add_translation_numbers(app, ctx);
  add_certificate(app, ctx, exit_code);
  add_pack(app, ctx);
  add_density(app, ctx);
  add_tiling_check(app, ctx);
  add_spectral_probe(app, ctx);
  add_corpus_verify(app, ctx, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_parse;
  } catch (const ps::parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return exit_parse;
  } catch (const ps::validation_error& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return exit_validation;
  } catch (const ps::numeric_error& e) {
    std::fprintf(stderr, "numeric (inconclusive): %s\n", e.what());
    return exit_numeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_validation;
  }
  return exit_code;
}
