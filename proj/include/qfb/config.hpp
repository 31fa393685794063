#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfb/grid.hpp"
#include "qfb/params.hpp"

namespace qfb {

inline constexpr int manifest_schema_version = 1;
inline constexpr int csv_schema_version = 1;
inline constexpr std::string_view tool_version = "1.0.0";

/// Every input of every subcommand. Zero means "derive from the rest" for
/// W, P, dt, t_end, scan_points and threads; resolve() fills those in.
struct RunConfig {
  // physics
  double omega_g = 1.0;
  int n = 1;
  double R = 0.5;
  double delta_phi = 0.0;
  std::string kernel = "sin";

  // grid
  double W = 0.0;
  long long P = 0;

  // integration
  double dt = 0.0;
  double t_end = 0.0;
  long long snapshot_stride = 0;
  std::string initial = "dark";  ///< dark | excited | perturbed
  double delta_cc = 0.01;        ///< perturbation, in units of alpha_grid
  double delta_cc_phase = 0.0;   ///< phase of delta_cc relative to c_c [rad]
  std::string delta_ce_phase = "auto";  ///< "auto" (colinear with c_e) or radians
  double peak_threshold = 1e-2;

  // stability
  std::string method = "auto";  ///< auto | dense | secular
  double weight_threshold = 1e-3;
  double dedup_tol = 0.0;

  // spectrum
  std::string window_lo = "auto";
  std::string window_hi = "auto";
  long long scan_points = 0;
  double log2R_min = -6.0;
  double log2R_max = 6.0;
  double log2R_step = 0.0625;
  int n_max = 4;
  bool product_law = false;
  std::string figure;  ///< sweep preset: fig5a..fig5d, fig6

  // run
  long long threads = 0;
  std::string output_dir;  ///< default: $QFB_OUTPUT_DIR, else "out"
  std::string tag;         ///< file prefix, default: subcommand name

  /// Assigns one key from its text form. Angles accept "pi", "pi/2",
  /// "3pi/2", "0.25pi". Throws Error{config} for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Reads "key = value" lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);

  static const std::vector<std::string>& keys();

  /// Applies presets and fills derived defaults for the given subcommand.
  void resolve(std::string_view subcommand);

  PhysicalParams params() const;
  /// Uses W, P when set, the desk-scale default grid otherwise.
  ModeGrid grid(const PhysicalParams& p) const;

  nlohmann::ordered_json to_json() const;
};

/// Parses a real number or a multiple of pi.
double parse_angle(std::string_view text);

}  // namespace qfb
