#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qfb/params.hpp"

namespace qfb {

/// sin: half-cavity feedback. cos: spin dimer, G ∝ cos(k′L).
enum class Kernel { sin, cos };

std::string_view to_string(Kernel k);
/// "sin" or "cos"; throws Error{config} otherwise.
Kernel parse_kernel(std::string_view s);

/// f(ω) = (ω−ω_g)² − κ(ω−ω_g)·K(ωτ−Δφ) − ω_g².
///
/// The cos kernel is evaluated as the sin kernel at Δφ − π/2, so both share
/// one code path and the dimer mapping holds bit for bit.
class CharEqn {
 public:
  explicit CharEqn(const PhysicalParams& params, Kernel kernel = Kernel::sin);

  const PhysicalParams& params() const noexcept { return params_; }
  Kernel kernel() const noexcept { return kernel_; }
  /// Phase entering the sine: Δφ (sin) or Δφ − π/2 mod 2π (cos).
  double sine_phase() const noexcept { return phase_; }

  double operator()(double omega) const;
  /// ∂f/∂ω.
  double d_omega(double omega) const;
  /// ∂²f/∂ω².
  double d2_omega(double omega) const;
  /// ∂f/∂R at fixed ω (κ = 2Rω_g).
  double d_R(double omega) const;
  /// ∂²f/∂ω∂R.
  double d_omega_R(double omega) const;

 private:
  PhysicalParams params_;
  Kernel kernel_;
  double phase_;
};

double char_fn(const CharEqn& eqn, double omega);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// [ω_g − 4ω_g − 2π/τ, ω_g + 4ω_g + 2π/τ].
Window default_window(const PhysicalParams& params);

/// 16 samples per period 2π/τ of the feedback term.
std::size_t min_scan_points(const PhysicalParams& params, Window w);
/// 2048 samples per period; the default used when scan_points = 0.
std::size_t default_scan_points(const PhysicalParams& params, Window w);

struct RootSet {
  std::vector<double> roots;     ///< ascending
  std::vector<double> marginal;  ///< grazing double roots, ascending
  double bracket_resolution = 0.0;
  double max_residual = 0.0;  ///< max |f| over roots, in units of ω_g²
  Window window;
  std::size_t scan_points = 0;

  std::size_t size() const noexcept { return roots.size(); }
};

/// Sign-change scan, bisection to 1e−12·ω_g, one Newton polish. Local minima
/// of |f| without a sign change are refined on f′ = 0 and reported as
/// marginal when |f| < 1e−8·ω_g².
///
/// Throws Error{resolution} if scan_points < min_scan_points.
RootSet find_roots(const CharEqn& eqn, Window window, std::size_t scan_points = 0);
RootSet find_roots(const CharEqn& eqn);

/// Number of sign changes (plus exact zeros) on the scan, without polishing.
std::size_t count_roots(const CharEqn& eqn, Window window, std::size_t scan_points);

struct CriticalOptions {
  double R_min = 1e-3;
  double R_max = 10.0;
  double R_baseline = 1e-6;   ///< stands in for R → 0
  std::size_t coarse_points = 257;  ///< log-spaced over [R_min, R_max]
  double tolerance = 1e-4;
  std::size_t scan_points = 0;  ///< 0: default_scan_points on the window
};

struct CriticalR {
  int n = 1;
  double delta_phi = 0.0;
  Kernel kernel = Kernel::sin;

  double R_bar = 0.0;  ///< midpoint of the final bracket
  double R_lo = 0.0;   ///< largest R seen at baseline count
  double R_hi = 0.0;   ///< smallest R seen above baseline count
  std::size_t baseline_count = 0;
  std::size_t count_above = 0;

  /// Tangency f = 0 ∧ f_ω = 0 solved by Newton from the bracket.
  double R_fold = 0.0;
  double omega_fold = 0.0;
  bool pitchfork = false;  ///< new pair straddles a persistent root
  bool fold_converged = false;
  bool cross_validated = false;  ///< fold converged and |R_fold − R_bar| small

  /// Coarse-scan R values where the count decreased.
  std::vector<double> monotonicity_violations;
};

/// Infimum R on [R_min, R_max] at which the root count on the default window
/// exceeds its R → 0 value. Throws Error{not_found} if the count never rises.
CriticalR critical_R(int n, double delta_phi, Kernel kernel = Kernel::sin,
                     const CriticalOptions& options = {});

struct ProductLawRow {
  int n = 0;
  CriticalR critical;
  double product = 0.0;    ///< n·R̄
  double rel_error = 0.0;  ///< |n·R̄ − 1/(2π)| / (1/(2π))
  bool pass = false;       ///< rel_error < 0.02
};

std::vector<ProductLawRow> product_law(int n_max, const CriticalOptions& options = {});

/// lo, lo+step, …, hi (inclusive up to rounding).
std::vector<double> log2_grid(double lo = -6.0, double hi = 6.0, double step = 1.0 / 16.0);

struct SweepRow {
  double log2R = 0.0;
  double R = 0.0;
  RootSet roots;
};

/// One find_roots per R = 2^log2R on a fixed window; rows keep input order.
/// `threads` = 0 uses the hardware concurrency.
std::vector<SweepRow> sweep(int n, double delta_phi, Kernel kernel,
                            const std::vector<double>& log2R,
                            std::optional<Window> window = {},
                            unsigned threads = 0);

}  // namespace qfb
