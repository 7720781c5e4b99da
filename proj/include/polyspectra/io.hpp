#pragma once

// Serialization boundary: polytope documents in/out, JSON reports for every
// module, CSV tables for plot-ready data, and atomic file writes. All report
// emitters use ordered JSON and carry the schema version plus the tolerance set
// in force, and contain no timestamps -- wall-clock metadata goes to a separate
// sidecar so repeated runs with one config are byte-identical.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyspectra/certificate.hpp"
#include "polyspectra/common.hpp"
#include "polyspectra/corpus.hpp"
#include "polyspectra/face_wave.hpp"
#include "polyspectra/fourier.hpp"
#include "polyspectra/ortho_pack.hpp"
#include "polyspectra/polytope.hpp"
#include "polyspectra/tiling.hpp"

namespace polyspectra {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Polytope documents
// ---------------------------------------------------------------------------

// Parse a polytope document: {"dimension": d, "vertices": [[..], ..],
// "faces": [[i, ..], ..], optional "simplices", optional "name",
// optional "normals"}. Throws parse_error on malformed JSON/shape and
// validation_error (from build_polytope) on bad geometry.
inline polytope load_polytope(const std::string& document) {
  ordered_json j;
  try {
    j = ordered_json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("polytope document is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("dimension") || !j.contains("vertices") ||
        !j.contains("faces"))
      throw parse_error("polytope document needs dimension, vertices, and faces");
    int dimension = j.at("dimension").get<int>();
    std::string name = j.value("name", std::string("polytope"));
    auto vertices = j.at("vertices").get<std::vector<vecd>>();
    auto faces = j.at("faces").get<std::vector<std::vector<int>>>();
    std::vector<std::vector<int>> simplices;
    if (j.contains("simplices")) simplices = j.at("simplices").get<std::vector<std::vector<int>>>();
    if (j.contains("normals")) {
      auto normals = j.at("normals").get<std::vector<vecd>>();
      return build_polytope(dimension, name, vertices, faces, simplices, &normals);
    }
    return build_polytope(dimension, name, vertices, faces, simplices);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("polytope document has a malformed field: ") + e.what());
  }
}

inline polytope load_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open polytope document: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_polytope(buf.str());
}

inline ordered_json polytope_document(const polytope& p) {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["name"] = p.name;
  j["dimension"] = p.dimension;
  j["vertices"] = p.vertices;
  ordered_json faces = ordered_json::array();
  for (const auto& f : p.faces) faces.push_back(f.vertices);
  j["faces"] = std::move(faces);
  ordered_json simps = ordered_json::array();
  for (const auto& s : p.simplices) simps.push_back(s.vertices);
  j["simplices"] = std::move(simps);
  return j;
}

// ---------------------------------------------------------------------------
// Shared report plumbing
// ---------------------------------------------------------------------------

inline ordered_json tolerance_block() {
  ordered_json t;
  t["planar"] = tol::planar;
  t["unit"] = tol::unit;
  t["closure"] = tol::closure;
  t["align"] = tol::align;
  t["imbalance"] = tol::imbalance;
  t["ft"] = tol::ft;
  t["series_switch"] = tol::series_switch;
  t["zero"] = tol::zero;
  t["coarse"] = tol::coarse;
  t["pack_step"] = tol::pack_step;
  t["safety_factor"] = tol::safety_factor;
  t["margin"] = tol::margin;
  return t;
}

inline ordered_json report_envelope(const std::string& kind) {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["kind"] = kind;
  j["tolerances"] = tolerance_block();
  return j;
}

// Atomic text write: temp file in the destination directory, then rename.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  fs::create_directories(dir);
  fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot open output file: " + tmp.string());
    out << content;
    if (!out) throw parse_error("failed writing output file: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void write_json_report(const std::filesystem::path& path, const ordered_json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

// Wall-clock sidecar; the only place a timestamp ever appears.
inline void write_meta_sidecar(const std::filesystem::path& report_path,
                               const std::string& command_line) {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["report"] = report_path.filename().string();
  j["command"] = command_line;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  j["timestamp_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_text_atomic(report_path.string() + ".meta.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Module reports
// ---------------------------------------------------------------------------

inline ordered_json to_json(const direction_summary& s) {
  ordered_json j = report_envelope("direction-report");
  j["xi"] = s.xi;
  ordered_json faces = ordered_json::array();
  for (const auto& f : s.faces) {
    ordered_json e;
    e["face_index"] = f.face_index;
    e["sign"] = f.sign;
    e["measure"] = f.measure;
    e["offset"] = f.offset;
    faces.push_back(std::move(e));
  }
  j["orthogonal_faces"] = std::move(faces);
  j["imbalance"] = s.imbalance;
  j["applicable"] = std::abs(s.imbalance) > tol::imbalance;
  j["near_parallel_warning"] = s.near_parallel_warning;
  return j;
}

inline ordered_json to_json(const ft_value& v) {
  ordered_json j;
  j["eta"] = v.eta;
  j["re"] = v.value.real();
  j["im"] = v.value.imag();
  j["abs"] = std::abs(v.value);
  return j;
}

inline ordered_json to_json(const grad_bound_estimate& g) {
  ordered_json j = report_envelope("gradient-bound");
  j["value"] = g.value;
  j["observed_sup"] = g.observed_sup;
  j["safety_factor"] = g.safety_factor;
  j["samples"] = g.samples;
  j["t_max"] = g.t_max;
  j["seed"] = g.seed;
  j["argmax"] = g.argmax;
  j["rigor"] = "sampled bound, not rigorous";
  return j;
}

inline ordered_json to_json(const face_wave& w) {
  ordered_json j;
  ordered_json terms = ordered_json::array();
  for (const auto& t : w.terms) {
    ordered_json e;
    e["coefficient"] = t.coefficient;
    e["frequency"] = t.frequency;
    terms.push_back(std::move(e));
  }
  j["terms"] = std::move(terms);
  j["normalized"] = w.normalized;
  j["normalization"] = w.normalization;
  j["derivative_bound"] = derivative_bound(w);
  return j;
}

inline ordered_json to_json(const slice_data& s) {
  ordered_json j = report_envelope("slice-profile");
  j["xi"] = s.xi;
  j["t_min"] = s.t_min;
  j["t_max"] = s.t_max;
  j["step"] = s.step;
  j["samples"] = static_cast<long long>(s.samples.size());
  j["k3_observed"] = s.k3_observed;
  j["k3_at"] = s.k3_at;
  j["rigor"] = "empirical sup of t^2 |residual| over the sampled range";
  j["wave"] = to_json(s.wave);
  return j;
}

inline std::string slice_csv(const slice_data& s) {
  std::ostringstream out;
  out.precision(17);
  out << "t,re,im,abs,leading_re,leading_im,residual\n";
  for (const auto& sample : s.samples)
    out << sample.t << ',' << sample.value.real() << ',' << sample.value.imag() << ','
        << std::abs(sample.value) << ',' << sample.leading.real() << ','
        << sample.leading.imag() << ',' << std::abs(sample.residual) << '\n';
  return out.str();
}

inline std::string wave_csv(const face_wave& w, double t_min, double t_max, double step) {
  std::ostringstream out;
  out.precision(17);
  out << "t,re,im\n";
  for (double t = t_min; t <= t_max + 1e-12; t += step) {
    cplx v = eval_wave(w, t);
    out << t << ',' << v.real() << ',' << v.imag() << '\n';
  }
  return out.str();
}

inline ordered_json to_json(const translation_certificate& c) {
  ordered_json j = report_envelope("translation-certificate");
  j["epsilon"] = c.epsilon.str();
  j["epsilon_value"] = c.eps;
  j["tau_step"] = c.tau_step;
  j["t_scanned"] = c.t_scanned;
  j["ell"] = c.ell;
  j["stable"] = c.stable;
  j["doublings"] = c.doublings;
  j["max_gap_initial"] = c.max_gap_initial;
  j["max_gap_final"] = c.max_gap_final;
  ordered_json reps = ordered_json::array();
  for (const auto& r : c.representatives) {
    ordered_json e;
    e["interval_index"] = r.index;
    e["tau"] = r.tau;
    e["bound"] = r.bound;
    reps.push_back(std::move(e));
  }
  j["representatives"] = std::move(reps);
  return j;
}

inline ordered_json to_json(const named_check& c) {
  ordered_json j;
  j["name"] = c.name;
  j["lhs"] = c.lhs;
  j["relation"] = c.relation;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["holds"] = c.holds;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline ordered_json to_json(const tube_region& t) {
  ordered_json j;
  j["xi"] = t.xi;
  j["ell"] = t.ell;
  j["segments"] = t.segments;
  j["cube_side"] = t.cube_side;
  ordered_json iv = ordered_json::array();
  for (const auto& r : t.intervals) iv.push_back(std::vector<double>{r[0], r[1]});
  j["intervals"] = std::move(iv);
  return j;
}

inline ordered_json to_json(const certificate_report& r) {
  ordered_json j = report_envelope("certificate");
  j["polytope"] = r.polytope_name;
  j["dimension"] = r.dimension;
  j["xi"] = r.xi;
  j["imbalance"] = r.imbalance;
  j["epsilon"] = r.epsilon.str();
  j["epsilon_value"] = r.eps;
  ordered_json k;
  k["k2_sampled"] = r.k2_sampled;
  k["k3_sampled"] = r.k3_sampled;
  k["k2_chain"] = r.k2_chain;
  k["k3_chain"] = r.k3_chain;
  k["kf"] = r.kf;
  k["k_cert"] = r.k_cert;
  j["constants"] = std::move(k);
  j["ell"] = r.ell;
  j["ell_stable"] = r.ell_stable;
  j["segments"] = r.segments;
  j["separation"] = r.separation;
  if (r.r0_defined) j["r0"] = r.r0;
  j["capacity_per_cube"] = r.capacity_per_cube;
  j["capacity_per_tube"] = r.capacity_per_tube;
  j["tube"] = to_json(r.tube);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = std::move(checks);
  j["notes"] = r.notes;
  j["verdict"] = r.verdict;
  return j;
}

inline ordered_json to_json(const density_verdict& v) {
  ordered_json j = report_envelope("density-contradiction");
  j["tubes_hit"] = v.tubes_hit;
  j["max_tube_count"] = v.max_tube_count;
  j["capacity"] = v.capacity;
  j["window_side"] = v.window_side;
  j["density_bound"] = v.density_bound;
  j["required_density"] = v.required_density;
  j["verdict"] = v.verdict;
  return j;
}

inline ordered_json to_json(const point_set& s) {
  ordered_json j = report_envelope("point-set");
  j["dimension"] = s.dimension;
  j["provenance"] = s.provenance;
  j["seed"] = s.seed;
  j["count"] = static_cast<long long>(s.points.size());
  j["points"] = s.points;
  return j;
}

inline point_set load_point_set(const std::string& document) {
  ordered_json j;
  try {
    j = ordered_json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("point-set document is not valid JSON: ") + e.what());
  }
  try {
    point_set s;
    s.dimension = j.at("dimension").get<int>();
    s.points = j.at("points").get<std::vector<vecd>>();
    s.provenance = j.value("provenance", std::string("user-supplied"));
    s.seed = j.value("seed", 0ULL);
    for (const auto& p : s.points)
      if (static_cast<int>(p.size()) != s.dimension)
        throw parse_error("point arity differs from declared dimension");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("point-set document has a malformed field: ") + e.what());
  }
}

inline point_set load_point_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open point-set document: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_point_set(buf.str());
}

inline ordered_json to_json(const zero_set_probe& z) {
  ordered_json j = report_envelope("zero-probe");
  j["spec"] = z.spec;
  j["count"] = static_cast<long long>(z.zeros.size());
  j["zeros"] = z.zeros;
  j["residuals"] = z.residuals;
  if (z.r0_defined) j["r0"] = z.r0;
  j["r0_defined"] = z.r0_defined;
  return j;
}

inline ordered_json to_json(const density_estimate& d) {
  ordered_json j = report_envelope("density-estimate");
  j["estimate"] = d.estimate;
  j["spread"] = d.spread;
  j["largest_radius"] = d.largest_radius;
  j["clipped_samples"] = d.clipped_samples;
  j["samples"] = static_cast<long long>(d.samples.size());
  return j;
}

inline std::string density_csv(const density_estimate& d) {
  std::ostringstream out;
  out.precision(17);
  out << "radius,count,ball_volume,ratio,clipped";
  if (!d.samples.empty())
    for (std::size_t i = 0; i < d.samples.front().center.size(); ++i) out << ",center_" << i;
  out << '\n';
  for (const auto& s : d.samples) {
    out << s.radius << ',' << s.count << ',' << s.ball_volume << ',' << s.ratio << ','
        << (s.clipped ? 1 : 0);
    for (double c : s.center) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

inline ordered_json to_json(const spectral_probe_report& r) {
  ordered_json j = report_envelope("spectral-probe");
  j["target"] = r.target;
  j["max_deviation"] = r.max_deviation;
  j["argmax"] = r.argmax;
  j["grid_points"] = r.grid_points;
  j["frequency_count"] = r.frequency_count;
  j["tail_radius"] = r.tail_radius;
  j["tail_empirical"] = r.tail_empirical;
  j["per_term_bound"] = r.per_term_bound;
  j["tail_note"] = r.tail_note;
  return j;
}

inline ordered_json to_json(const tiling_report& t) {
  ordered_json j = report_envelope("tiling-check");
  j["level"] = t.level;
  j["tiles"] = t.tiles;
  j["verdict"] = t.verdict;
  j["total_samples"] = t.total_samples;
  j["safe_samples"] = t.safe_samples;
  j["exceptional_fraction"] = t.exceptional_fraction;
  j["min_multiplicity"] = t.min_multiplicity;
  j["max_multiplicity"] = t.max_multiplicity;
  j["mean_multiplicity"] = t.mean_multiplicity;
  j["sample_step"] = t.sample_step;
  j["boundary_slack"] = t.boundary_slack;
  return j;
}

inline std::string multiplicity_csv(const tiling_report& t) {
  std::ostringstream out;
  out << "multiplicity,samples\n";
  for (const auto& [m, n] : t.histogram) out << m << ',' << n << '\n';
  return out.str();
}

inline ordered_json to_json(const remark1_report& r) {
  ordered_json j = report_envelope("density-identity");
  j["density"] = r.density;
  j["spread"] = r.spread;
  j["expected"] = r.expected;
  j["relative_error"] = r.relative_error;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

inline ordered_json to_json(const std::vector<corpus_result>& results) {
  ordered_json j = report_envelope("corpus-verify");
  ordered_json entries = ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    ordered_json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["failures"] = r.failures;
    all = all && r.pass;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  j["all_pass"] = all;
  return j;
}

}  // namespace polyspectra
