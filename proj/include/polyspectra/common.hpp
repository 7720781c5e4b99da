#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyspectra {

using cplx = std::complex<double>;
using vecd = std::vector<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr const char* schema_version = "1";

// Pinned tolerances and scan parameters used across the toolkit.
namespace tol {
inline constexpr double planar = 1e-9;        // vertex distance to face hyperplane
inline constexpr double unit = 1e-9;          // unit-normal / unit-direction check
inline constexpr double closure = 1e-9;       // sum of measure-weighted normals, per coordinate
inline constexpr double align = 1e-9;         // |<nu,xi>| within align of 1 counts as parallel
inline constexpr double imbalance = 1e-6;     // nonzero-imbalance threshold
inline constexpr double ft = 1e-8;            // agreement between transform evaluation paths
inline constexpr double series_switch = 1e-4; // node-spread threshold for the series branch
inline constexpr double zero = 1e-9;          // verified-zero threshold on |FT|
inline constexpr double coarse = 1e-3;        // coarse scan threshold for zero candidates
inline constexpr double pack_step = 0.1;      // candidate grid step for greedy packs
inline constexpr double safety_factor = 2.0;  // inflation of sampled (non-rigorous) constants
inline constexpr double margin = 0.05;        // inflation of N and D so strict inequalities have slack
inline constexpr double boundary_slack_factor = 1e-6; // x tile diameter, tiling boundary exclusion
inline constexpr int tiling_grid_divisor = 64;        // sample step = tile diameter / divisor
}  // namespace tol

// Error families map to distinct CLI exit codes.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct validation_error : std::runtime_error {
  std::string code;  // stable identifier, e.g. "NonPlanarFace"
  validation_error(std::string code_, const std::string& what)
      : std::runtime_error(code_ + ": " + what), code(std::move(code_)) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Exact rational, used so thresholds like 1/6 are not rounded before comparisons.
struct rational {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p/q", integers, or plain decimals (converted via power-of-ten denominator).
  static rational parse(const std::string& text) {
    if (text.empty()) throw parse_error("empty rational literal");
    auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        rational r;
        std::size_t used = 0;
        r.num = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw parse_error("bad rational numerator: " + text);
        r.den = std::stoll(text.substr(slash + 1), &used);
        if (used != text.size() - slash - 1) throw parse_error("bad rational denominator: " + text);
        if (r.den == 0) throw parse_error("zero denominator: " + text);
        if (r.den < 0) { r.den = -r.den; r.num = -r.num; }
        return r;
      }
      auto dot = text.find('.');
      if (dot == std::string::npos) {
        rational r;
        r.num = std::stoll(text);
        r.den = 1;
        return r;
      }
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      int frac_digits = static_cast<int>(text.size() - dot - 1);
      if (frac_digits > 15) throw parse_error("too many decimal digits: " + text);
      rational r;
      r.num = std::stoll(digits);
      r.den = 1;
      for (int i = 0; i < frac_digits; ++i) r.den *= 10;
      return r;
    } catch (const std::invalid_argument&) {
      throw parse_error("bad rational literal: " + text);
    } catch (const std::out_of_range&) {
      throw parse_error("rational literal out of range: " + text);
    }
  }
};

}  // namespace polyspectra
